use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::fit::{loglog_fit, LineFit};

/// Lag in `[min_period, max_period]` at which the mean-removed curve is most
/// strongly correlated with itself, refined by parabolic interpolation.
///
/// The autocorrelation is the biased estimator (no division by the overlap),
/// so among equally strong recurrences the shortest lag wins. A comb of
/// revival peaks has flat harmonics in its periodogram; the lag domain does
/// not have that ambiguity.
pub fn dominant_period(curve: &Curve, min_period: f64, max_period: f64) -> Result<f64> {
    if !(min_period > 0.0 && max_period > min_period) {
        return Err(Error::invalid(format!(
            "period window [{min_period}, {max_period}] is empty"
        )));
    }
    let t = curve.abscissa();
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0)) {
        return Err(Error::invalid("dominant_period needs uniformly spaced samples"));
    }
    let y = curve.ordinate();
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let len = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = y.iter().map(|v| Complex::new(v - mean, 0.0)).collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for c in &mut buf {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let acf: Vec<f64> = buf[..n].iter().map(|c| c.re).collect();

    let lo = ((min_period / dt).ceil() as usize).max(1);
    let hi = ((max_period / dt).floor() as usize).min(n - 2);
    if lo > hi {
        return Err(Error::invalid(format!(
            "no lags with period in [{min_period}, {max_period}]"
        )));
    }
    let k = (lo..=hi)
        .max_by(|&a, &b| acf[a].total_cmp(&acf[b]))
        .expect("non-empty lag range");
    let (a, b, c) = (acf[k - 1], acf[k], acf[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 { (0.5 * (a - c) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    Ok((k as f64 + shift) * dt)
}

/// Log-log fit of the upper envelope of `curve` on `[t_lo, t_hi]`.
///
/// The window is cut into `bins` logarithmically equal bins; the largest
/// sample of each non-empty bin is one fit point.
pub fn envelope_decay(curve: &Curve, t_lo: f64, t_hi: f64, bins: usize) -> Result<LineFit> {
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(Error::invalid(format!("envelope window [{t_lo}, {t_hi}] is invalid")));
    }
    if bins < 3 {
        return Err(Error::invalid("envelope fit needs at least 3 bins"));
    }
    let ratio = (t_hi / t_lo).ln() / bins as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for (t, y) in curve.points().filter(|(t, _)| (t_lo..=t_hi).contains(t)) {
        let b = (((t / t_lo).ln() / ratio) as usize).min(bins - 1);
        if best[b].is_none_or(|(_, m)| y > m) {
            best[b] = Some((t, y));
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = best.into_iter().flatten().unzip();
    loglog_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_of_a_sinusoid() {
        let ys: Vec<f64> = (0..2000).map(|k| (2.0 * std::f64::consts::PI * k as f64 / 37.3).cos()).collect();
        let c = Curve::unit_spaced(0.0, ys, "").unwrap();
        let p = dominant_period(&c, 5.0, 500.0).unwrap();
        assert!((p - 37.3).abs() < 0.05, "{p}");
    }

    #[test]
    fn period_window_excludes_stronger_lines() {
        let ys: Vec<f64> = (0..4000)
            .map(|k| {
                let t = k as f64;
                3.0 * (t / 10.0 * std::f64::consts::TAU).sin() + (t / 200.0 * std::f64::consts::TAU).sin()
            })
            .collect();
        let c = Curve::unit_spaced(0.0, ys, "").unwrap();
        let p = dominant_period(&c, 50.0, 1000.0).unwrap();
        assert!((p - 200.0).abs() < 1.0, "{p}");
        assert!(dominant_period(&c, 10.0, 5.0).is_err());
    }

    #[test]
    fn envelope_of_modulated_power_law() {
        let ys: Vec<f64> = (1..5000)
            .map(|k| {
                let t = k as f64;
                (t.sin().powi(2) + 0.01) / t
            })
            .collect();
        let c = Curve::unit_spaced(1.0, ys, "").unwrap();
        let f = envelope_decay(&c, 10.0, 4000.0, 12).unwrap();
        assert!((f.slope + 1.0).abs() < 0.02, "{}", f.slope);
    }
}
