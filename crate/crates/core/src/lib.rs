//! Wave-packet propagation on finite tight-binding chains with hard walls,
//! and fractal analysis of the space-time probability density.
//!
//! The Hamiltonian is `H = sum_x eps_x |x><x| + (|x><x+1| + h.c.)` with unit
//! hopping and `hbar = 1`. Sites are 1-based in every public interface that
//! takes a site; eigenstate indices are 0-based.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carpet;
pub mod curve;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod fractal;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod synth;

pub use curve::Curve;
pub use error::{Error, Result};
pub use fit::LineFit;
