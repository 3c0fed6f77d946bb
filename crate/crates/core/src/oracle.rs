//! Brute-force propagation through the dense matrix exponential of the
//! Hamiltonian, for checking the spectral propagator on small chains.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Chain;

/// Largest chain the oracle accepts; the cost is cubic in `N`.
pub const ORACLE_MAX_SITES: usize = 64;

/// `exp(-i H t)` as a dense complex matrix.
pub fn dense_propagator(chain: &Chain, t: f64) -> Result<DMatrix<Complex64>> {
    let n = chain.n_sites();
    if n > ORACLE_MAX_SITES {
        return Err(Error::invalid(format!(
            "dense oracle limited to {ORACLE_MAX_SITES} sites, got {n}"
        )));
    }
    let h = chain.hamiltonian_dense();
    let generator = DMatrix::from_fn(n, n, |r, c| Complex64::new(0.0, -t * h[r * n + c]));
    Ok(generator.exp())
}

pub fn oracle_evolve(chain: &Chain, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    if psi0.len() != chain.n_sites() {
        return Err(Error::invalid(format!(
            "state has {} sites but the chain has {}",
            psi0.len(),
            chain.n_sites()
        )));
    }
    let u = dense_propagator(chain, t)?;
    let v = nalgebra::DVector::from_column_slice(psi0);
    Ok((u * v).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_propagator() {
        let chain = Chain::zero(2).unwrap();
        let t = 0.7;
        let u = dense_propagator(&chain, t).unwrap();
        assert!((u[(0, 0)] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(1, 0)] - Complex64::new(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn propagator_is_unitary() {
        let chain = Chain::from_potential(vec![0.3, -1.2, 0.8, 2.0, -0.4, 0.0]).unwrap();
        let u = dense_propagator(&chain, 13.7).unwrap();
        let id = u.adjoint() * &u;
        for r in 0..6 {
            for c in 0..6 {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((id[(r, c)] - want).norm() < 1e-12);
            }
        }
        assert!(dense_propagator(&Chain::zero(65).unwrap(), 1.0).is_err());
    }
}
