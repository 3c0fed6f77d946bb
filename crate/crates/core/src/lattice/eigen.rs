use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::tridiag::implicit_ql;
use super::Chain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenSource {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone)]
enum Basis {
    /// `c_x^(j) = table[(x j) mod 2(N+1)]` with 1-based `x`, `j`.
    Sine { table: Vec<f64> },
    /// Column-major, column `j` is eigenvector `j`.
    Dense { columns: Vec<f64> },
}

/// Eigenvalues and real orthonormal eigenvectors of a chain Hamiltonian.
///
/// State and site indices taken by the methods here are zero-based.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    energies: Vec<f64>,
    basis: Basis,
    source: EigenSource,
}

/// Closed-form sine basis of the zero-potential chain, ordered by the
/// quantum number `j = 1..=N` (so energies descend).
///
/// Eigenvector amplitudes are served from a table of `2(N+1)` sines rather
/// than an `N x N` matrix, which keeps `N = 10^4` chains cheap.
pub fn analytic_eigensystem(n: usize) -> Result<EigenSystem> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "a chain needs at least 2 sites, got {n}"
        )));
    }
    let np1 = (n + 1) as f64;
    let energies = (1..=n)
        .map(|j| 2.0 * (j as f64 * PI / np1).cos())
        .collect();
    let norm = (2.0 / np1).sqrt();
    let period = 2 * (n + 1);
    let table = (0..period)
        .map(|k| {
            // sin is odd about k = N+1; fold to keep the argument in [0, pi].
            if k <= n + 1 {
                norm * (k as f64 * PI / np1).sin()
            } else {
                -norm * ((period - k) as f64 * PI / np1).sin()
            }
        })
        .collect();
    Ok(EigenSystem {
        energies,
        basis: Basis::Sine { table },
        source: EigenSource::Analytic,
    })
}

/// Full numerical eigendecomposition with eigenvalues ascending.
///
/// Each eigenvector is signed so that its first component whose magnitude
/// exceeds `1e-8` of the column maximum is positive.
pub fn solve_tridiagonal_eigensystem(chain: &Chain) -> Result<EigenSystem> {
    let n = chain.n_sites();
    let mut diag = chain.potential().to_vec();
    let mut off = vec![1.0; n];
    let mut columns = vec![0.0; n * n];
    for k in 0..n {
        columns[k * n + k] = 1.0;
    }
    implicit_ql(&mut diag, &mut off, &mut columns)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let energies = order.iter().map(|&k| diag[k]).collect();
    let mut sorted = Vec::with_capacity(n * n);
    for &k in &order {
        let col = &columns[k * n..(k + 1) * n];
        let max = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = col
            .iter()
            .copied()
            .find(|v| v.abs() > 1e-8 * max)
            .unwrap_or(0.0);
        if lead < 0.0 {
            sorted.extend(col.iter().map(|v| -v));
        } else {
            sorted.extend_from_slice(col);
        }
    }
    Ok(EigenSystem {
        energies,
        basis: Basis::Dense { columns: sorted },
        source: EigenSource::Numeric,
    })
}

impl EigenSystem {
    /// Analytic basis for zero-potential chains, numeric solve otherwise.
    pub fn for_chain(chain: &Chain) -> Result<Self> {
        if chain.is_zero_potential() {
            analytic_eigensystem(chain.n_sites())
        } else {
            solve_tridiagonal_eigensystem(chain)
        }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn source(&self) -> EigenSource {
        self.source
    }

    /// `c_x^(j)` for zero-based `site` and `state`.
    pub fn component(&self, site: usize, state: usize) -> f64 {
        let n = self.len();
        match &self.basis {
            Basis::Sine { table } => table[((site + 1) * (state + 1)) % (2 * (n + 1))],
            Basis::Dense { columns } => columns[state * n + site],
        }
    }

    /// Eigenvector `state` in the site basis.
    pub fn column(&self, state: usize) -> Cow<'_, [f64]> {
        let n = self.len();
        match &self.basis {
            Basis::Dense { columns } => Cow::Borrowed(&columns[state * n..(state + 1) * n]),
            Basis::Sine { .. } => Cow::Owned((0..n).map(|x| self.component(x, state)).collect()),
        }
    }

    /// Amplitudes of every eigenvector at `site`.
    pub fn row(&self, site: usize) -> Vec<f64> {
        (0..self.len()).map(|j| self.component(site, j)).collect()
    }

    /// `a_j = sum_x c_x^(j) a_x`.
    pub fn to_eigen_basis(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(amplitudes.len(), n);
        match &self.basis {
            Basis::Dense { columns } => columns
                .chunks_exact(n)
                .map(|col| dot_real_complex(col, amplitudes))
                .collect(),
            // The sine basis matrix is symmetric in (x, j).
            Basis::Sine { table } => sine_transform(table, amplitudes),
        }
    }

    /// `a_x = sum_j c_x^(j) a_j`.
    pub fn to_site_basis(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(coefficients.len(), n);
        match &self.basis {
            Basis::Dense { columns } => {
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                for (col, z) in columns.chunks_exact(n).zip(coefficients) {
                    if z.re == 0.0 && z.im == 0.0 {
                        continue;
                    }
                    for (o, &c) in out.iter_mut().zip(col) {
                        o.re += c * z.re;
                        o.im += c * z.im;
                    }
                }
                out
            }
            Basis::Sine { table } => sine_transform(table, coefficients),
        }
    }

    /// `sum_j c_x^(j) z_j` at a single zero-based site.
    pub fn amplitude_at(&self, site: usize, coefficients: &[Complex64]) -> Complex64 {
        let n = self.len();
        match &self.basis {
            Basis::Dense { columns } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, z) in coefficients.iter().enumerate() {
                    acc += z * columns[j * n + site];
                }
                acc
            }
            Basis::Sine { table } => sine_row_dot(table, site + 1, coefficients),
        }
    }
}

fn dot_real_complex(real: &[f64], z: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (&r, c) in real.iter().zip(z) {
        re += r * c.re;
        im += r * c.im;
    }
    Complex64::new(re, im)
}

fn sine_row_dot(table: &[f64], x: usize, z: &[Complex64]) -> Complex64 {
    let period = table.len();
    let (mut re, mut im) = (0.0, 0.0);
    let mut k = 0;
    for c in z {
        k += x;
        if k >= period {
            k -= period;
        }
        let s = table[k];
        re += s * c.re;
        im += s * c.im;
    }
    Complex64::new(re, im)
}

fn sine_transform(table: &[f64], z: &[Complex64]) -> Vec<Complex64> {
    (1..=z.len()).map(|x| sine_row_dot(table, x, z)).collect()
}
