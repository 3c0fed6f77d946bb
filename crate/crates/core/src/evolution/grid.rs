use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    Linear { t0: f64, dt: f64, count: usize },
    Explicit,
}

/// Strictly increasing, non-negative sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    samples: Vec<f64>,
    kind: GridKind,
}

impl TimeGrid {
    pub fn linear(t0: f64, dt: f64, count: usize) -> Result<Self> {
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(Error::invalid(format!("grid start must be >= 0, got {t0}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("grid step must be > 0, got {dt}")));
        }
        let samples = (0..count).map(|k| t0 + k as f64 * dt).collect();
        Ok(TimeGrid {
            samples,
            kind: GridKind::Linear { t0, dt, count },
        })
    }

    /// `start, start + 1, ..., end` (inclusive).
    pub fn integers(start: u64, end: u64) -> Result<Self> {
        if end < start {
            return Err(Error::invalid(format!("empty integer range {start}..={end}")));
        }
        TimeGrid::linear(start as f64, 1.0, (end - start + 1) as usize)
    }

    /// `0, dt, 2 dt, ...` up to and including `tmax` (within rounding).
    pub fn span(tmax: f64, dt: f64) -> Result<Self> {
        if !(tmax >= 0.0) {
            return Err(Error::invalid(format!("tmax must be >= 0, got {tmax}")));
        }
        if !(dt > 0.0) {
            return Err(Error::invalid(format!("grid step must be > 0, got {dt}")));
        }
        let count = (tmax / dt + 1e-9).floor() as usize + 1;
        TimeGrid::linear(0.0, dt, count)
    }

    pub fn explicit(samples: Vec<f64>) -> Result<Self> {
        if let Some(t) = samples.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::invalid(format!("sample times must be finite and >= 0, got {t}")));
        }
        if let Some(k) = samples.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(format!(
                "sample times not strictly increasing at index {}",
                k + 1
            )));
        }
        Ok(TimeGrid {
            samples,
            kind: GridKind::Explicit,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Index of a sample equal to `t` within `1e-9 * max(1, |t|)`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        let k = self.samples.partition_point(|&s| s < t - tol);
        (k < self.samples.len() && (self.samples[k] - t).abs() <= tol).then_some(k)
    }

    /// Sample closest to `t`.
    pub fn nearest(&self, t: f64) -> Option<f64> {
        self.samples
            .iter()
            .copied()
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
    }
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GridKind::Linear { t0, dt, count } => write!(f, "linear(t0={t0},dt={dt},count={count})"),
            GridKind::Explicit => write!(f, "explicit(count={})", self.samples.len()),
        }
    }
}
