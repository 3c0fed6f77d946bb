use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::fit::loglog_fit;

/// Smallest multiplier of the default ladder. Below it, lattice curves are
/// still smooth on the sampling scale and the local slope falls towards 1.
const LADDER_MIN: u64 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountParams {
    /// Base box width along the abscissa.
    pub tau: f64,
    /// Base box height along the ordinate.
    pub a: f64,
    /// Strictly increasing box multipliers `b`.
    pub b_values: Vec<u64>,
}

impl BoxCountParams {
    pub fn new(tau: f64, a: f64, b_values: Vec<u64>) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid(format!("box width tau must be > 0, got {tau}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("box height a must be > 0, got {a}")));
        }
        if b_values.len() < 4 {
            return Err(Error::invalid(format!(
                "need at least 4 box multipliers, got {}",
                b_values.len()
            )));
        }
        if b_values[0] == 0 || b_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("box multipliers must be positive and strictly increasing"));
        }
        Ok(BoxCountParams { tau, a, b_values })
    }

    /// `tau` with the default ladder for the span of `curve`.
    pub fn for_curve(curve: &Curve, tau: f64, a: f64) -> Result<Self> {
        BoxCountParams::new(tau, a, default_ladder(curve.span() / tau))
    }
}

/// Powers of two from 16 up to half the span (in units of `tau`).
///
/// Short curves start the ladder lower so that 4 multipliers remain.
pub fn default_ladder(span_units: f64) -> Vec<u64> {
    let top = span_units / 2.0;
    let mut start = LADDER_MIN;
    loop {
        let ladder: Vec<u64> = std::iter::successors(Some(start), |b| b.checked_mul(2))
            .take_while(|&b| b as f64 <= top)
            .collect();
        if ladder.len() >= 4 || start == 1 {
            return ladder;
        }
        start /= 2;
    }
}

/// Box counts `N(b, a)` for every multiplier in `params`.
///
/// The abscissa is cut into consecutive windows of width `b tau` from the
/// first sample; a sample on a boundary belongs to both windows. A window
/// whose samples span a height `h` contributes `ceil(h / (b a)) + 1` boxes.
/// A window holding no sample counts one box.
pub fn box_count(curve: &Curve, params: &BoxCountParams) -> Result<Vec<(u64, u64)>> {
    let span = curve.span();
    params
        .b_values
        .iter()
        .map(|&b| {
            let width = b as f64 * params.tau;
            if width > span * (1.0 + 1e-12) {
                return Err(Error::invalid(format!(
                    "box width {width} (b = {b}) exceeds the curve span {span}"
                )));
            }
            Ok((b, count_at(curve, width, b as f64 * params.a)))
        })
        .collect()
}

fn count_at(curve: &Curve, width: f64, height: f64) -> u64 {
    let x = curve.abscissa();
    let y = curve.ordinate();
    let x0 = x[0];
    let tol = 1e-9 * width;
    let windows = ((curve.span() / width) - 1e-9).ceil().max(1.0) as usize;
    let mut total = 0u64;
    let mut start = 0usize;
    for i in 0..windows {
        let hi = x0 + (i + 1) as f64 * width;
        let end = start + x[start..].partition_point(|&v| v <= hi + tol);
        if end == start {
            total += 1;
            continue;
        }
        let (lo_y, hi_y) = y[start..end]
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        total += ((hi_y - lo_y) / height).ceil() as u64 + 1;
        start = if (x[end - 1] - hi).abs() <= tol { end - 1 } else { end };
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub dimension: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub counts: Vec<(u64, u64)>,
    pub params: BoxCountParams,
    /// `(sqrt(b_i b_{i+1}), -d ln N / d ln b)` between neighbouring multipliers.
    pub local_slopes: Vec<(f64, f64)>,
}

impl DimensionEstimate {
    /// False for estimates outside `[0.9, 2.1]`, which indicate a failed fit.
    pub fn in_range(&self) -> bool {
        (0.9..=2.1).contains(&self.dimension)
    }
}

/// `D = -slope` of `ln N(b, a)` against `ln b`.
pub fn self_affine_dimension(curve: &Curve, params: &BoxCountParams) -> Result<DimensionEstimate> {
    let counts = box_count(curve, params)?;
    if counts.windows(2).all(|w| w[0].1 == w[1].1) {
        return Err(Error::FitDegenerate(format!(
            "all box counts equal {}",
            counts[0].1
        )));
    }
    let bs: Vec<f64> = counts.iter().map(|&(b, _)| b as f64).collect();
    let ns: Vec<f64> = counts.iter().map(|&(_, n)| n as f64).collect();
    let fit = loglog_fit(&bs, &ns)?;
    let local_slopes = counts
        .windows(2)
        .map(|w| {
            let (b0, n0) = (w[0].0 as f64, w[0].1 as f64);
            let (b1, n1) = (w[1].0 as f64, w[1].1 as f64);
            ((b0 * b1).sqrt(), -(n1 / n0).ln() / (b1 / b0).ln())
        })
        .collect();
    Ok(DimensionEstimate {
        dimension: -fit.slope,
        slope_stderr: fit.stderr,
        r_squared: fit.r_squared,
        counts,
        params: params.clone(),
        local_slopes,
    })
}
