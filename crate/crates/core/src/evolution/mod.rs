//! Spectral propagation `Psi(t) = sum_j exp(-i E_j t) |j><j|Psi(0)>` and the
//! time-domain observables built on it.

mod analysis;
mod field;
mod grid;
mod observables;

use num_complex::Complex64;
use rayon::prelude::*;

pub use analysis::{dominant_period, envelope_decay};
pub use field::{
    compute_field, compute_field_with_budget, diagonal_series, probability_at, site_series, space_slice,
    ProbabilityField, DEFAULT_FIELD_BUDGET,
};
pub use grid::{GridKind, TimeGrid};
pub use observables::{
    integrated_correlation, mean_square_displacement, msd_series, return_probability_overlap,
    return_probability_series, time_scales, TimeScales,
};

use crate::error::{Error, Result};
use crate::lattice::{EigenSystem, InitialState};

/// Expansion coefficients `<j|Psi(0)>` of a state in an eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCoefficients {
    coeffs: Vec<Complex64>,
}

impl EigenCoefficients {
    /// Validates unit norm to within `1e-12`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "eigen coefficients must have unit norm, got {norm}"
            )));
        }
        Ok(EigenCoefficients { coeffs })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `|<j|Psi(0)>|^2`.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Coefficients after evolving for `dt`, which may be negative.
    pub fn advanced(&self, eigsys: &EigenSystem, dt: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(eigsys.energies())
            .map(|(c, &e)| c * Complex64::cis(-e * dt))
            .collect();
        EigenCoefficients { coeffs }
    }

    /// Weighted mean of the 1-based state label, `sum_j j |a_j|^2`.
    pub fn central_label(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (j + 1) as f64 * c.norm_sqr())
            .sum()
    }
}

pub fn project_to_eigenbasis(state: &InitialState, eigsys: &EigenSystem) -> Result<EigenCoefficients> {
    if state.len() != eigsys.len() {
        return Err(Error::invalid(format!(
            "state has {} sites but the eigensystem has {} states",
            state.len(),
            eigsys.len()
        )));
    }
    Ok(EigenCoefficients {
        coeffs: eigsys.to_eigen_basis(state.amplitudes()),
    })
}

/// Site amplitudes `Psi(x, t)` for `t >= 0`.
pub fn evolve_at_time(coeffs: &EigenCoefficients, eigsys: &EigenSystem, t: f64) -> Result<Vec<Complex64>> {
    check_dims(coeffs, eigsys)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("evolution time must be >= 0, got {t}")));
    }
    Ok(eigsys.to_site_basis(coeffs.advanced(eigsys, t).as_slice()))
}

fn check_dims(coeffs: &EigenCoefficients, eigsys: &EigenSystem) -> Result<()> {
    if coeffs.len() != eigsys.len() {
        return Err(Error::invalid(format!(
            "{} coefficients for an eigensystem with {} states",
            coeffs.len(),
            eigsys.len()
        )));
    }
    Ok(())
}

/// Samples per block in [`map_phases`]. Block boundaries depend only on the
/// grid, so results are identical for any worker count.
const PHASE_BLOCK: usize = 32;

/// Evaluates `f(k, exp(-i E_j t_k))` for every sample `k` of `grid`, in order.
///
/// On linear grids the phases are advanced by complex multiplication within
/// a block and recomputed exactly at each block start.
pub(crate) fn map_phases<R, F>(energies: &[f64], grid: &TimeGrid, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, &[Complex64]) -> R + Sync,
{
    let times = grid.samples();
    let step = match grid.kind() {
        GridKind::Linear { dt, .. } => {
            Some(energies.iter().map(|&e| Complex64::cis(-e * dt)).collect::<Vec<_>>())
        }
        GridKind::Explicit => None,
    };
    let blocks: Vec<usize> = (0..times.len()).step_by(PHASE_BLOCK).collect();
    blocks
        .into_par_iter()
        .map(|start| {
            let end = (start + PHASE_BLOCK).min(times.len());
            let mut phase: Vec<Complex64> = energies.iter().map(|&e| Complex64::cis(-e * times[start])).collect();
            let mut out = Vec::with_capacity(end - start);
            out.push(f(start, &phase));
            for (k, &t) in times.iter().enumerate().take(end).skip(start + 1) {
                match &step {
                    Some(step) => phase.iter_mut().zip(step).for_each(|(p, s)| *p *= s),
                    None => phase
                        .iter_mut()
                        .zip(energies)
                        .for_each(|(p, &e)| *p = Complex64::cis(-e * t)),
                }
                out.push(f(k, &phase));
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{analytic_eigensystem, make_initial_state, Chain, Recipe};

    fn setup(n: usize, recipe: Recipe) -> (EigenSystem, InitialState, EigenCoefficients) {
        let chain = Chain::zero(n).unwrap();
        let es = analytic_eigensystem(n).unwrap();
        let st = make_initial_state(recipe, &chain, &es).unwrap();
        let co = project_to_eigenbasis(&st, &es).unwrap();
        (es, st, co)
    }

    #[test]
    fn projection_of_an_eigenvector() {
        let n = 12;
        let es = analytic_eigensystem(n).unwrap();
        let col: Vec<Complex64> = es.column(4).iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let st = InitialState::from_amplitudes(col, Recipe::SpatialUniform).unwrap();
        let co = project_to_eigenbasis(&st, &es).unwrap();
        for (j, c) in co.as_slice().iter().enumerate() {
            let want = if j == 4 { 1.0 } else { 0.0 };
            assert!((c - want).norm() < 1e-14);
        }
    }

    #[test]
    fn eigen_uniform_projects_to_flat_coefficients() {
        let (_, _, co) = setup(50, Recipe::EigenUniform);
        let w = 1.0 / 50f64.sqrt();
        assert!(co.as_slice().iter().all(|c| (c.re - w).abs() < 1e-13 && c.im.abs() < 1e-15));
    }

    #[test]
    fn spatial_uniform_two_sites() {
        // c^(1) = (1, 1)/sqrt2, c^(2) = (1, -1)/sqrt2; a = (1, 1)/sqrt2
        let (_, _, co) = setup(2, Recipe::SpatialUniform);
        assert!((co.as_slice()[0].re - 1.0).abs() < 1e-15);
        assert!(co.as_slice()[1].norm() < 1e-15);
    }

    #[test]
    fn two_site_closed_form() {
        // H = sigma_x, exp(-iHt)(1,0) = (cos t, -i sin t)
        let (es, _, co) = setup(2, Recipe::Local { site: 1 });
        for t in [0.0, 0.3, 1.0, 2.5, 17.0] {
            let psi = evolve_at_time(&co, &es, t).unwrap();
            assert!((psi[0] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
            assert!((psi[1] - Complex64::new(0.0, -t.sin())).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_at_time_zero_and_reversal() {
        let (es, st, co) = setup(40, Recipe::gaussian(4.0));
        let psi0 = evolve_at_time(&co, &es, 0.0).unwrap();
        for (a, b) in psi0.iter().zip(st.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = co.advanced(&es, 123.4).advanced(&es, -123.4);
        let psi = evolve_at_time(&back, &es, 0.0).unwrap();
        for (a, b) in psi.iter().zip(st.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
        assert!(evolve_at_time(&co, &es, -1.0).is_err());
    }

    #[test]
    fn local_revival_near_n_plus_one() {
        let (es, _, co) = setup(1000, Recipe::Local { site: 1 });
        let grid = TimeGrid::linear(900.0, 1.0, 201).unwrap();
        let series = site_series(&co, &es, 1, &grid).unwrap();
        let (k, _) = series.argmax();
        let t = series.abscissa()[k];
        assert!((t - 1001.0).abs() <= 5.0, "maximum at {t}");
    }

    #[test]
    fn phase_recurrence_matches_exact_phases() {
        let es = analytic_eigensystem(30).unwrap();
        let lin = TimeGrid::linear(0.0, 0.7, 100).unwrap();
        let exp = TimeGrid::explicit(lin.samples().to_vec()).unwrap();
        let a = map_phases(es.energies(), &lin, |_, p| p.to_vec());
        let b = map_phases(es.energies(), &exp, |_, p| p.to_vec());
        for (pa, pb) in a.iter().zip(&b) {
            for (x, y) in pa.iter().zip(pb) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (_, st, _) = setup(5, Recipe::SpatialUniform);
        let es = analytic_eigensystem(6).unwrap();
        assert!(project_to_eigenbasis(&st, &es).is_err());
    }
}
