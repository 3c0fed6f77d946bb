use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_dims, map_phases, EigenCoefficients, ProbabilityField, TimeGrid};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::lattice::{EigenSystem, InitialState};

/// `P_0(t) = |sum_j |a_j|^2 exp(-i E_j t)|^2`, independent of the eigenvectors.
pub fn return_probability_series(coeffs: &EigenCoefficients, eigsys: &EigenSystem, grid: &TimeGrid) -> Result<Curve> {
    check_dims(coeffs, eigsys)?;
    let w = coeffs.weights();
    let values = map_phases(eigsys.energies(), grid, |_, phase| {
        let (mut re, mut im) = (0.0, 0.0);
        for (wj, p) in w.iter().zip(phase) {
            re += wj * p.re;
            im += wj * p.im;
        }
        (re * re + im * im).min(1.0)
    });
    Curve::new(grid.samples().to_vec(), values, "P0(t)")
}

/// `|<Psi(0)|Psi(t)>|^2` evaluated from site amplitudes.
pub fn return_probability_overlap(
    state: &InitialState,
    coeffs: &EigenCoefficients,
    eigsys: &EigenSystem,
    grid: &TimeGrid,
) -> Result<Curve> {
    check_dims(coeffs, eigsys)?;
    if state.len() != eigsys.len() {
        return Err(Error::invalid(format!(
            "state has {} sites but the eigensystem has {} states",
            state.len(),
            eigsys.len()
        )));
    }
    let values = map_phases(eigsys.energies(), grid, |_, phase| {
        let z: Vec<Complex64> = coeffs.as_slice().iter().zip(phase).map(|(c, p)| c * p).collect();
        let psi = eigsys.to_site_basis(&z);
        let overlap: Complex64 = state.amplitudes().iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();
        overlap.norm_sqr()
    });
    Curve::new(grid.samples().to_vec(), values, "P0(t) overlap")
}

/// `C(t) = (1/t) int_0^t P_0`, trapezoidal, reported for samples with `t > 0`.
///
/// The integral starts at the first sample, so a series that starts late
/// misses the leading segment.
pub fn integrated_correlation(p0: &Curve) -> Result<Curve> {
    if p0.len() < 2 {
        return Err(Error::invalid("C(t) needs at least 2 samples"));
    }
    let t = p0.abscissa();
    let y = p0.ordinate();
    let mut acc = 0.0;
    let mut xs = Vec::with_capacity(t.len());
    let mut cs = Vec::with_capacity(t.len());
    for k in 0..t.len() {
        if k > 0 {
            acc += 0.5 * (y[k] + y[k - 1]) * (t[k] - t[k - 1]);
        }
        if t[k] > 0.0 {
            xs.push(t[k]);
            cs.push(if k == 0 { y[0] } else { acc / t[k] });
        }
    }
    Curve::new(xs, cs, "C(t)")
}

/// `<x^2>(t_k) = sum_x (x - origin)^2 P(x, t_k)` with a 1-based origin.
pub fn mean_square_displacement(field: &ProbabilityField, origin: usize) -> Result<Curve> {
    let n = field.n_sites();
    check_origin(origin, n)?;
    let values = (0..field.grid().len()).map(|k| second_moment(field.slice(k), origin)).collect();
    Curve::new(field.grid().samples().to_vec(), values, format!("<x^2> about {origin}"))
}

/// Same as [`mean_square_displacement`] without materialising the field.
pub fn msd_series(coeffs: &EigenCoefficients, eigsys: &EigenSystem, origin: usize, grid: &TimeGrid) -> Result<Curve> {
    check_dims(coeffs, eigsys)?;
    check_origin(origin, eigsys.len())?;
    let values = map_phases(eigsys.energies(), grid, |_, phase| {
        let z: Vec<Complex64> = coeffs.as_slice().iter().zip(phase).map(|(c, p)| c * p).collect();
        let p: Vec<f64> = eigsys.to_site_basis(&z).iter().map(|a| a.norm_sqr()).collect();
        second_moment(&p, origin)
    });
    Curve::new(grid.samples().to_vec(), values, format!("<x^2> about {origin}"))
}

fn check_origin(origin: usize, n: usize) -> Result<()> {
    if origin == 0 || origin > n {
        return Err(Error::invalid(format!("origin {origin} outside 1..={n}")));
    }
    Ok(())
}

fn second_moment(p: &[f64], origin: usize) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = (i + 1) as f64 - origin as f64;
            d * d * v
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    /// `(N+1) / sin(j pi / (N+1))`.
    pub t_classical: f64,
    /// `(N+1)^2 / (pi |cos(j pi / (N+1))|)`.
    pub t_revival: f64,
    pub j_bar: f64,
}

const VANISHING: f64 = 1e-12;

/// Classical and revival periods around the central label `j_bar` (hbar = 1).
///
/// The revival period is reported as a magnitude; its formula changes sign
/// across the band centre.
pub fn time_scales(n: usize, j_bar: f64) -> Result<TimeScales> {
    if n == 0 || !(j_bar >= 1.0 && j_bar <= n as f64) {
        return Err(Error::invalid(format!("central label {j_bar} outside 1..={n}")));
    }
    let np1 = (n + 1) as f64;
    let theta = j_bar * PI / np1;
    let s = theta.sin();
    let c = theta.cos().abs();
    Ok(TimeScales {
        t_classical: if s.abs() < VANISHING { f64::INFINITY } else { np1 / s },
        t_revival: if c < VANISHING { f64::INFINITY } else { np1 * np1 / (PI * c) },
        j_bar,
    })
}
