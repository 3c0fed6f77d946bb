use num_complex::Complex64;

use super::{check_dims, map_phases, EigenCoefficients, TimeGrid};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::lattice::EigenSystem;

/// Default ceiling on the memory a materialised field may occupy (1 GiB).
pub const DEFAULT_FIELD_BUDGET: usize = 1 << 30;

/// `P(x, t_k)` on every site and every sample of a time grid.
///
/// Values are stored time-major: the `N` site values of sample `k` are
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityField {
    n_sites: usize,
    grid: TimeGrid,
    values: Vec<f64>,
    provenance: String,
}

impl ProbabilityField {
    pub fn from_values(n_sites: usize, grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_sites * grid.len() {
            return Err(Error::invalid(format!(
                "field of {n_sites} sites x {} samples needs {} values, got {}",
                grid.len(),
                n_sites * grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !(*v >= 0.0)) {
            return Err(Error::invalid(format!(
                "probability at index {k} is negative or not a number"
            )));
        }
        Ok(ProbabilityField {
            n_sites,
            grid,
            values,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All sites at sample `k`.
    pub fn slice(&self, k: usize) -> &[f64] {
        &self.values[k * self.n_sites..(k + 1) * self.n_sites]
    }

    /// `P(site, t_k)` with a 1-based site.
    pub fn get(&self, site: usize, k: usize) -> f64 {
        self.values[k * self.n_sites + site - 1]
    }

    pub fn bytes_for(n_sites: usize, samples: usize) -> usize {
        n_sites.saturating_mul(samples).saturating_mul(std::mem::size_of::<f64>())
    }
}

pub fn compute_field(coeffs: &EigenCoefficients, eigsys: &EigenSystem, grid: &TimeGrid) -> Result<ProbabilityField> {
    compute_field_with_budget(coeffs, eigsys, grid, DEFAULT_FIELD_BUDGET)
}

pub fn compute_field_with_budget(
    coeffs: &EigenCoefficients,
    eigsys: &EigenSystem,
    grid: &TimeGrid,
    budget: usize,
) -> Result<ProbabilityField> {
    check_dims(coeffs, eigsys)?;
    let n = eigsys.len();
    let requested = ProbabilityField::bytes_for(n, grid.len());
    if requested > budget {
        return Err(Error::Capacity { requested, budget });
    }
    let slices = map_phases(eigsys.energies(), grid, |_, phase| slice_probability(coeffs, eigsys, phase));
    let values = slices.into_iter().flatten().collect();
    ProbabilityField::from_values(n, grid.clone(), values)
}

fn slice_probability(coeffs: &EigenCoefficients, eigsys: &EigenSystem, phase: &[Complex64]) -> Vec<f64> {
    let z: Vec<Complex64> = coeffs.as_slice().iter().zip(phase).map(|(c, p)| c * p).collect();
    eigsys.to_site_basis(&z).iter().map(|a| a.norm_sqr()).collect()
}

/// `P(x, t)` for all sites at one time.
pub fn probability_at(coeffs: &EigenCoefficients, eigsys: &EigenSystem, t: f64) -> Result<Vec<f64>> {
    Ok(super::evolve_at_time(coeffs, eigsys, t)?
        .iter()
        .map(|a| a.norm_sqr())
        .collect())
}

/// `(x, P(x, t))` for `x = 1..=N`, without materialising a field.
pub fn space_slice(coeffs: &EigenCoefficients, eigsys: &EigenSystem, t: f64) -> Result<Curve> {
    let p = probability_at(coeffs, eigsys, t)?;
    Curve::unit_spaced(1.0, p, format!("P(x, t={t})"))
}

/// `(t_k, P(site, t_k))` with a 1-based site, in `O(N)` per sample.
pub fn site_series(coeffs: &EigenCoefficients, eigsys: &EigenSystem, site: usize, grid: &TimeGrid) -> Result<Curve> {
    check_dims(coeffs, eigsys)?;
    let n = eigsys.len();
    if site == 0 || site > n {
        return Err(Error::invalid(format!("site {site} outside 1..={n}")));
    }
    let weights: Vec<Complex64> = coeffs
        .as_slice()
        .iter()
        .zip(eigsys.row(site - 1))
        .map(|(c, v)| c * v)
        .collect();
    let values = map_phases(eigsys.energies(), grid, |_, phase| {
        let (mut re, mut im) = (0.0, 0.0);
        for (w, p) in weights.iter().zip(phase) {
            re += w.re * p.re - w.im * p.im;
            im += w.re * p.im + w.im * p.re;
        }
        re * re + im * im
    });
    Curve::new(grid.samples().to_vec(), values, format!("P(x={site}, t)"))
}

/// `(x, P(x, t = x))` for `x = 1..=N`.
pub fn diagonal_series(coeffs: &EigenCoefficients, eigsys: &EigenSystem) -> Result<Curve> {
    check_dims(coeffs, eigsys)?;
    let n = eigsys.len();
    let grid = TimeGrid::integers(1, n as u64)?;
    let values = map_phases(eigsys.energies(), &grid, |k, phase| {
        let z: Vec<Complex64> = coeffs.as_slice().iter().zip(phase).map(|(c, p)| c * p).collect();
        eigsys.amplitude_at(k, &z).norm_sqr()
    });
    Curve::unit_spaced(1.0, values, "P(x, t=x)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::project_to_eigenbasis;
    use crate::lattice::{analytic_eigensystem, make_initial_state, Chain, Recipe};

    fn coeffs(n: usize, recipe: Recipe) -> (EigenSystem, EigenCoefficients) {
        let es = analytic_eigensystem(n).unwrap();
        let st = make_initial_state(recipe, &Chain::zero(n).unwrap(), &es).unwrap();
        let co = project_to_eigenbasis(&st, &es).unwrap();
        (es, co)
    }

    #[test]
    fn uniform_slice_at_zero() {
        let (es, co) = coeffs(100, Recipe::SpatialUniform);
        let f = compute_field(&co, &es, &TimeGrid::explicit(vec![0.0]).unwrap()).unwrap();
        assert!(f.slice(0).iter().all(|p| (p - 0.01).abs() < 1e-14));
    }

    #[test]
    fn two_site_quarter_period() {
        let (es, co) = coeffs(2, Recipe::Local { site: 1 });
        let grid = TimeGrid::explicit(vec![0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        let f = compute_field(&co, &es, &grid).unwrap();
        assert!((f.get(1, 0) - 1.0).abs() < 1e-15 && f.get(2, 0).abs() < 1e-15);
        assert!(f.get(1, 1).abs() < 1e-15 && (f.get(2, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slices_are_normalised() {
        let (es, co) = coeffs(64, Recipe::gaussian(3.0));
        let f = compute_field(&co, &es, &TimeGrid::linear(0.0, 0.37, 300).unwrap()).unwrap();
        for k in 0..f.grid().len() {
            assert!((f.slice(k).iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn streaming_routines_agree_with_field() {
        let (es, co) = coeffs(30, Recipe::EigenUniform);
        let grid = TimeGrid::integers(0, 40).unwrap();
        let f = compute_field(&co, &es, &grid).unwrap();
        let s = site_series(&co, &es, 7, &grid).unwrap();
        for (k, p) in s.ordinate().iter().enumerate() {
            assert!((p - f.get(7, k)).abs() < 1e-14);
        }
        let d = diagonal_series(&co, &es).unwrap();
        for x in 1..=30 {
            assert!((d.ordinate()[x - 1] - f.get(x, x)).abs() < 1e-14);
        }
        let sp = space_slice(&co, &es, 12.0).unwrap();
        assert_eq!(sp.abscissa()[0], 1.0);
        for x in 1..=30 {
            assert!((sp.ordinate()[x - 1] - f.get(x, 12)).abs() < 1e-14);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (es, co) = coeffs(100, Recipe::SpatialUniform);
        let grid = TimeGrid::integers(0, 99).unwrap();
        let err = compute_field_with_budget(&co, &es, &grid, 1000).unwrap_err();
        assert!(matches!(err, Error::Capacity { requested: 80000, budget: 1000 }));
    }

    #[test]
    fn stationary_state_has_flat_time_series() {
        let n = 20;
        let es = analytic_eigensystem(n).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[3] = Complex64::new(1.0, 0.0);
        let co = EigenCoefficients::new(c).unwrap();
        let s = site_series(&co, &es, 5, &TimeGrid::integers(0, 50).unwrap()).unwrap();
        let first = s.ordinate()[0];
        assert!(s.ordinate().iter().all(|p| (p - first).abs() < 1e-14));
    }
}
