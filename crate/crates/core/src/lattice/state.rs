use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{Chain, EigenSystem};
use crate::error::{Error, Result};

/// Recipe for an initial wave packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recipe {
    /// `a_x = delta_{x, site}` with a 1-based site.
    Local { site: usize },
    /// `a_x = 1 / sqrt(N)`.
    SpatialUniform,
    /// Equal weight `1 / sqrt(N)` on every eigenstate.
    EigenUniform,
    /// `|a_x|^2 ~ exp(-(x - center)^2 / (2 sigma2))`, real positive amplitudes.
    /// `center = None` means `N / 2`.
    Gaussian { sigma2: f64, center: Option<f64> },
}

impl Recipe {
    pub fn gaussian(sigma2: f64) -> Self {
        Recipe::Gaussian {
            sigma2,
            center: None,
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Local { site } => write!(f, "local:{site}"),
            Recipe::SpatialUniform => write!(f, "uniform"),
            Recipe::EigenUniform => write!(f, "eigen-uniform"),
            Recipe::Gaussian {
                sigma2,
                center: None,
            } => write!(f, "gaussian:{sigma2}"),
            Recipe::Gaussian {
                sigma2,
                center: Some(c),
            } => write!(f, "gaussian:{sigma2}@{c}"),
        }
    }
}

impl FromStr for Recipe {
    type Err = Error;

    /// Parses `local:<x0>`, `uniform`, `eigen-uniform`, `gaussian:<sigma2>`
    /// or `gaussian:<sigma2>@<center>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::invalid(format!("bad initial-state recipe '{s}': {why}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        match (head, arg) {
            ("uniform" | "spatial-uniform", None) => Ok(Recipe::SpatialUniform),
            ("eigen-uniform", None) => Ok(Recipe::EigenUniform),
            ("local", Some(a)) => a
                .parse()
                .map(|site| Recipe::Local { site })
                .map_err(|_| bad("site must be a positive integer")),
            ("gaussian", Some(a)) => {
                let (s2, c) = match a.split_once('@') {
                    Some((s2, c)) => (s2, Some(c)),
                    None => (a, None),
                };
                let sigma2 = s2.parse().map_err(|_| bad("sigma2 must be a number"))?;
                let center = c
                    .map(|c| c.parse().map_err(|_| bad("center must be a number")))
                    .transpose()?;
                Ok(Recipe::Gaussian { sigma2, center })
            }
            _ => Err(bad(
                "expected local:<x0>, uniform, eigen-uniform or gaussian:<sigma2>",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    amplitudes: Vec<Complex64>,
    recipe: Recipe,
}

impl InitialState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn recipe(&self) -> Recipe {
        self.recipe
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Wraps arbitrary amplitudes after normalising them; `recipe` is kept
    /// only as a label.
    pub fn from_amplitudes(mut amplitudes: Vec<Complex64>, recipe: Recipe) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("initial amplitudes have zero or non-finite norm"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(InitialState { amplitudes, recipe })
    }

    /// Site of the probability centroid, rounded to the nearest site (1-based).
    pub fn centroid_site(&self) -> usize {
        let mean: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(x, a)| (x + 1) as f64 * a.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr();
        (mean.round() as usize).clamp(1, self.len())
    }
}

pub fn make_initial_state(recipe: Recipe, chain: &Chain, eigsys: &EigenSystem) -> Result<InitialState> {
    let n = chain.n_sites();
    if eigsys.len() != n {
        return Err(Error::invalid(format!(
            "eigensystem has {} states but the chain has {n} sites",
            eigsys.len()
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let amplitudes = match recipe {
        Recipe::Local { site } => {
            if site == 0 || site > n {
                return Err(Error::invalid(format!(
                    "local site {site} outside 1..={n}"
                )));
            }
            let mut a = vec![zero; n];
            a[site - 1] = Complex64::new(1.0, 0.0);
            a
        }
        Recipe::SpatialUniform => vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n],
        Recipe::EigenUniform => {
            let w = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            let mut a = eigsys.to_site_basis(&vec![w; n]);
            let norm_sqr: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sqr - 1.0).abs() > 1e-12 {
                let norm = norm_sqr.sqrt();
                a.iter_mut().for_each(|z| *z /= norm);
            }
            a
        }
        Recipe::Gaussian { sigma2, center } => {
            if !(sigma2 > 0.0 && sigma2.is_finite()) {
                return Err(Error::invalid(format!(
                    "gaussian sigma2 must be positive, got {sigma2}"
                )));
            }
            let c = center.unwrap_or(n as f64 / 2.0);
            let weights: Vec<f64> = (1..=n)
                .map(|x| (-(x as f64 - c).powi(2) / (2.0 * sigma2)).exp())
                .collect();
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                return Err(Error::invalid(format!(
                    "gaussian centred at {c} has no weight on the chain"
                )));
            }
            weights
                .iter()
                .map(|w| Complex64::new((w / total).sqrt(), 0.0))
                .collect()
        }
    };
    Ok(InitialState { amplitudes, recipe })
}
