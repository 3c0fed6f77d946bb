use std::fmt;

use crate::error::{Error, Result};
use crate::fit::linear_fit;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSample {
    pub size: usize,
    /// `-sum P ln P` with `0 ln 0 = 0`.
    pub entropy: f64,
    /// `ln sum P^2`.
    pub log_participation: f64,
    pub time_stamp: f64,
}

pub fn measure_scaling_sample(p: &[f64], size: usize, t: f64) -> Result<ScalingSample> {
    if p.len() != size {
        return Err(Error::invalid(format!("measure has {} entries for size {size}", p.len())));
    }
    if let Some(v) = p.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::invalid(format!("measure has a negative or undefined entry {v}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("measure sums to {total}, not 1")));
    }
    let entropy = -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>();
    let log_participation = p.iter().map(|v| v * v).sum::<f64>().ln();
    Ok(ScalingSample {
        size,
        entropy: entropy.max(0.0),
        log_participation: log_participation.min(0.0),
        time_stamp: t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingKind {
    /// Information dimension, slope of the entropy against `ln N`.
    D1,
    /// Correlation dimension, minus the slope of `ln sum P^2` against `ln N`.
    D2,
}

impl fmt::Display for ScalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalingKind::D1 => "D1",
            ScalingKind::D2 => "D2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub kind: ScalingKind,
    pub dimension: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    /// `(N, entropy)` for D1 or `(N, ln sum P^2)` for D2.
    pub points: Vec<(usize, f64)>,
}

/// Samples sharing a size are averaged before the fit.
pub fn scaling_dimension_fit(samples: &[ScalingSample], kind: ScalingKind) -> Result<ScalingFit> {
    let mut sizes: Vec<usize> = samples.iter().map(|s| s.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 4 {
        return Err(Error::invalid(format!(
            "scaling fit needs at least 4 distinct sizes, got {}",
            sizes.len()
        )));
    }
    let points: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&n| {
            let vals: Vec<f64> = samples
                .iter()
                .filter(|s| s.size == n)
                .map(|s| match kind {
                    ScalingKind::D1 => s.entropy,
                    ScalingKind::D2 => s.log_participation,
                })
                .collect();
            (n, vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(ScalingFit {
        kind,
        dimension: match kind {
            ScalingKind::D1 => fit.slope,
            ScalingKind::D2 => -fit.slope,
        },
        slope_stderr: fit.stderr,
        r_squared: fit.r_squared,
        points,
    })
}
