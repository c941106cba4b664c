//! Implicit-shift QL eigensolver for symmetric tridiagonal matrices.
//!
//! Classic EISPACK-style iteration with plane-rotation accumulation. Two
//! accumulation modes are provided: the full eigenvector matrix (used by the
//! eigensystem module) and only the first row of it (all the Golub-Welsch
//! quadrature construction needs).

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues with full eigenvectors, sorted by ascending eigenvalue.
/// `off` holds the couplings between consecutive indices (length n - 1).
pub(crate) fn eigen_full(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = padded(off, n);
    // identity, row-major n x n
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, &mut z, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(order
        .into_iter()
        .map(|j| (d[j], (0..n).map(|i| z[i * n + j]).collect()))
        .collect())
}

/// Eigenvalues plus the first component of each orthonormal eigenvector,
/// sorted by ascending eigenvalue.
pub(crate) fn eigen_first_row(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = padded(off, n);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    ql_implicit(&mut d, &mut e, &mut z, 1)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals = order.iter().map(|&j| d[j]).collect();
    let first = order.iter().map(|&j| z[j]).collect();
    Ok((vals, first))
}

fn padded(off: &[f64], n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    e
}

/// In-place QL with implicit Wilkinson shifts. `z` is `nrows x n` row-major;
/// rotations are applied to its columns, so on exit column j of the original
/// accumulator has been mapped onto eigenvector j (up to the final sort).
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [f64], nrows: usize) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::EigenConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // recover: deflate and restart this sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in 0..nrows {
                    let base = row * n;
                    f = z[base + i + 1];
                    z[base + i + 1] = s * z[base + i] + c * f;
                    z[base + i] = c * z[base + i] - s * f;
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
