//! Tight-binding chains with hard-wall ends.
//!
//! The Hamiltonian is the real symmetric tridiagonal matrix with on-site
//! energies on the diagonal and hopping `+1` on both off-diagonals. Units
//! are fixed throughout the crate: hbar = 1, hopping = 1, lattice spacing = 1.
//!
//! Sites are labelled `1..=N` wherever a site appears as a physical
//! coordinate (initial-state positions, slice anchors, MSD origins). Raw
//! vector indices are zero-based.

mod eigen;
mod state;
mod tridiag;

use std::fmt;

pub use eigen::{analytic_eigensystem, solve_tridiagonal_eigensystem, EigenSource, EigenSystem};
pub use state::{make_initial_state, InitialState, Recipe};

use crate::error::{Error, Result};

/// How the on-site potential of a [`Chain`] was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Zero,
    /// `2 cos(2 pi x M / N)`; `fib_index` is set when `(M, N)` came from
    /// [`fibonacci_pair`].
    Quasiperiodic {
        m: u64,
        fib_index: Option<usize>,
    },
    /// Loaded from a file or supplied directly.
    Custom,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Zero => write!(f, "zero"),
            PotentialKind::Quasiperiodic { m, fib_index: Some(k) } => {
                write!(f, "quasiperiodic(M={m},fib_index={k})")
            }
            PotentialKind::Quasiperiodic { m, fib_index: None } => write!(f, "quasiperiodic(M={m})"),
            PotentialKind::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    potential: Vec<f64>,
    kind: PotentialKind,
}

impl Chain {
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_size(n_sites)?;
        Ok(Chain {
            potential: vec![0.0; n_sites],
            kind: PotentialKind::Zero,
        })
    }

    /// Chain of length `n` with the quasiperiodic potential for ratio `m / n`.
    pub fn quasiperiodic(m: u64, n: u64) -> Result<Self> {
        let potential = quasiperiodic_potential(m, n)?;
        check_size(potential.len())?;
        Ok(Chain {
            potential,
            kind: PotentialKind::Quasiperiodic { m, fib_index: None },
        })
    }

    /// Quasiperiodic chain with `(M, N) = fibonacci_pair(k)`.
    pub fn fibonacci(k: usize) -> Result<Self> {
        let (m, n) = fibonacci_pair(k)?;
        let mut chain = Chain::quasiperiodic(m, n)?;
        chain.kind = PotentialKind::Quasiperiodic {
            m,
            fib_index: Some(k),
        };
        Ok(chain)
    }

    pub fn from_potential(potential: Vec<f64>) -> Result<Self> {
        check_size(potential.len())?;
        if let Some(x) = potential.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "on-site energy at site {} is not finite",
                x + 1
            )));
        }
        Ok(Chain {
            potential,
            kind: PotentialKind::Custom,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.potential.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn is_zero_potential(&self) -> bool {
        self.potential.iter().all(|&v| v == 0.0)
    }

    /// `H v` for a real vector.
    pub fn apply_hamiltonian(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n_sites();
        assert_eq!(v.len(), n, "vector length must equal the number of sites");
        (0..n)
            .map(|x| {
                let mut acc = self.potential[x] * v[x];
                if x > 0 {
                    acc += v[x - 1];
                }
                if x + 1 < n {
                    acc += v[x + 1];
                }
                acc
            })
            .collect()
    }

    /// Dense row-major Hamiltonian.
    pub fn hamiltonian_dense(&self) -> Vec<f64> {
        let n = self.n_sites();
        let mut h = vec![0.0; n * n];
        for x in 0..n {
            h[x * n + x] = self.potential[x];
            if x + 1 < n {
                h[x * n + x + 1] = 1.0;
                h[(x + 1) * n + x] = 1.0;
            }
        }
        h
    }

    /// Max-row-sum norm of H, an upper bound on the spectral radius.
    pub fn hamiltonian_norm(&self) -> f64 {
        let n = self.n_sites();
        (0..n)
            .map(|x| {
                let hops = usize::from(x > 0) + usize::from(x + 1 < n);
                self.potential[x].abs() + hops as f64
            })
            .fold(0.0, f64::max)
    }

    pub fn describe(&self) -> String {
        format!("N={} potential={}", self.n_sites(), self.kind)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "a chain needs at least 2 sites, got {n}"
        )));
    }
    Ok(())
}

/// `(F_k, F_{k+1})` for the sequence `F_1 = F_2 = 1`.
pub fn fibonacci_pair(k: usize) -> Result<(u64, u64)> {
    if k < 2 {
        return Err(Error::invalid(format!(
            "Fibonacci index must be at least 2, got {k}"
        )));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for i in 2..=k {
        let next = a
            .checked_add(b)
            .ok_or_else(|| Error::Overflow(format!("F_{} does not fit in 64 bits", i + 1)))?;
        a = b;
        b = next;
    }
    Ok((a, b))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `eps_x = 2 cos(2 pi x M / N)` for `x = 1..=N`.
///
/// `x M` is reduced modulo `N` in integer arithmetic before the cosine is
/// taken, so `eps_N = 2` exactly.
pub fn quasiperiodic_potential(m: u64, n: u64) -> Result<Vec<f64>> {
    if m == 0 || m >= n {
        return Err(Error::invalid(format!(
            "quasiperiodic ratio requires 0 < M < N, got M={m}, N={n}"
        )));
    }
    if gcd(m, n) != 1 {
        return Err(Error::invalid(format!(
            "M={m} and N={n} are not coprime"
        )));
    }
    usize::try_from(n).map_err(|_| Error::Overflow(format!("N={n} does not fit in usize")))?;
    let tau = std::f64::consts::TAU;
    Ok((1..=n as u128)
        .map(|x| {
            let r = (x * m as u128) % n as u128;
            2.0 * (tau * r as f64 / n as f64).cos()
        })
        .collect())
}
