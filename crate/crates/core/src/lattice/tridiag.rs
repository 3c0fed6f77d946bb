//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! Follows the classic EISPACK `tql2` sweep: Wilkinson-type shift from the
//! leading 2x2 block, Givens rotations chased down the unreduced block, and
//! the rotations accumulated into the eigenvector matrix.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Diagonalises in place.
///
/// `diag` has length `n`; `off[i]` couples rows `i` and `i + 1` and must
/// have length `n` with `off[n - 1]` ignored. `vectors` is a column-major
/// `n x n` matrix that should hold the identity on entry; on exit column
/// `k` is the eigenvector for `diag[k]`. Eigenpairs are returned unsorted.
pub(crate) fn implicit_ql(diag: &mut [f64], off: &mut [f64], vectors: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(off.len(), n);
    debug_assert_eq!(vectors.len(), n * n);
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut scale = 0.0f64;

    for l in 0..n {
        scale = scale.max(diag[l].abs() + off[l].abs());
        let mut m = l;
        while m < n - 1 && off[m].abs() > eps * scale {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                    });
                }

                let g = diag[l];
                let mut p = (diag[l + 1] - g) / (2.0 * off[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                diag[l] = off[l] / (p + r);
                diag[l + 1] = off[l] * (p + r);
                let dl1 = diag[l + 1];
                let mut h = g - diag[l];
                for d in diag.iter_mut().skip(l + 2) {
                    *d -= h;
                }
                shift_total += h;

                p = diag[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = off[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * off[i];
                    h = c * p;
                    r = p.hypot(off[i]);
                    off[i + 1] = s * r;
                    s = off[i] / r;
                    c = p / r;
                    p = c * diag[i] - s * g;
                    diag[i + 1] = h + s * (c * g + s * diag[i]);

                    let (left, right) = vectors.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (vi, vn) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let t = *vn;
                        *vn = s * *vi + c * t;
                        *vi = c * *vi - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * off[l] / dl1;
                off[l] = s * p;
                diag[l] = c * p;

                if off[l].abs() <= eps * scale {
                    break;
                }
            }
        }
        diag[l] += shift_total;
        off[l] = 0.0;
    }
    Ok(())
}
