use crate::error::{Error, Result};

/// A sampled real function with a strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    abscissa: Vec<f64>,
    ordinate: Vec<f64>,
    label: String,
}

impl Curve {
    pub fn new(abscissa: Vec<f64>, ordinate: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if abscissa.len() != ordinate.len() {
            return Err(Error::invalid(format!(
                "curve abscissa has {} samples but ordinate has {}",
                abscissa.len(),
                ordinate.len()
            )));
        }
        if abscissa.len() < 2 {
            return Err(Error::invalid("a curve needs at least 2 samples"));
        }
        if let Some(k) = abscissa.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(format!(
                "curve abscissa not strictly increasing at sample {}",
                k + 1
            )));
        }
        Ok(Curve {
            abscissa,
            ordinate,
            label: label.into(),
        })
    }

    /// Samples at `start, start + 1, ...`.
    pub fn unit_spaced(start: f64, ordinate: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let abscissa = (0..ordinate.len()).map(|k| start + k as f64).collect();
        Curve::new(abscissa, ordinate, label)
    }

    pub fn abscissa(&self) -> &[f64] {
        &self.abscissa
    }

    pub fn ordinate(&self) -> &[f64] {
        &self.ordinate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.abscissa[self.len() - 1] - self.abscissa[0]
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.abscissa.iter().copied().zip(self.ordinate.iter().copied())
    }

    /// Index and value of the largest ordinate (first one on ties).
    pub fn argmax(&self) -> (usize, f64) {
        self.ordinate
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, v)| if v > best.1 { (k, v) } else { best })
    }

    /// Sub-curve with abscissa in `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Result<Curve> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self.points().filter(|(x, _)| (lo..=hi).contains(x)).unzip();
        Curve::new(xs, ys, self.label.clone())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
