//! Oracles used only by the unit tests: independent evaluation routes that
//! never touch the code paths they are checking.

use nalgebra::DMatrix;
use std::f64::consts::LN_2;

/// Simple deterministic generator for test inputs, uniform on [-1, 1).
pub(crate) fn xorshift(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed | 1;
    move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// General (a, b) Gauss-Jacobi rule for the weight `(1-x)^a (1+x)^b` on
/// `[-1, 1]`, built from the textbook recurrence coefficients and a dense
/// eigensolve. Independent of the crate's own quadrature construction.
pub(crate) fn general_gauss_jacobi(a: f64, b: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(a > -1.0 && b > -1.0 && m >= 2);
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut diag = (b - a) / (2.0 + a + b);
    for idx in 0..m - 1 {
        let k = idx as f64 + 1.0;
        let denom = 2.0 * k + a + b;
        let off = 2.0 / denom
            * (k * (k + a) * (k + b) * (k + a + b) / ((denom + 1.0) * (denom - 1.0))).sqrt();
        mat[(idx, idx)] = diag;
        mat[(idx, idx + 1)] = off;
        mat[(idx + 1, idx)] = off;
        diag = (b * b - a * a) / (denom * (denom + 2.0));
    }
    mat[(m - 1, m - 1)] = diag;
    let eig = mat.symmetric_eigen();
    let mass = ((a + b + 1.0) * LN_2 + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(a + b + 2.0)).exp();
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let v0 = eig.eigenvectors[(0, j)];
            (x, mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

// Stirling-series lgamma, local so the oracle does not share code with
// specfun::log_gamma.
fn lgamma(x: f64) -> f64 {
    if x < 10.0 {
        return lgamma(x + 1.0) - x.ln();
    }
    const COEF: [f64; 6] =
        [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360_360.0];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for &c in COEF.iter().rev() {
        corr = corr * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + corr * inv
}

/// Quadrature of the Kummer integral representation:
/// `1F1(a,b,z) = 1/B(a, b-a) int_0^1 e^{zt} t^{a-1} (1-t)^{b-a-1} dt`,
/// mapped to `[-1, 1]` so the endpoint singularities sit in the weight.
pub(crate) fn kummer_integral_oracle(a: f64, b: f64, z: f64) -> f64 {
    let (nodes, weights) = general_gauss_jacobi(b - a - 1.0, a - 1.0, 220);
    // t = (u + 1)/2; dt = du/2; the (1-t)^(b-a-1) t^(a-1) factors are the
    // Jacobi weight up to powers of two absorbed below.
    let integral: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&u, &w)| w * (z * 0.5 * (u + 1.0)).exp())
        .sum();
    let ln_b = lgamma(a) + lgamma(b - a) - lgamma(b);
    integral * (-(b - 1.0) * LN_2 - ln_b).exp()
}

/// Values of the classical (unnormalized) symmetric Jacobi polynomials
/// `P_k^{(alpha, alpha)}` at `x`, `k <= kmax`, via the standard three-term
/// recurrence written with general (a, b) coefficients.
pub(crate) fn unnormalized_jacobi_values(alpha: f64, kmax: usize, x: f64) -> Vec<f64> {
    let a = alpha;
    let b = alpha;
    let mut vals = Vec::with_capacity(kmax + 1);
    vals.push(1.0);
    if kmax == 0 {
        return vals;
    }
    vals.push(0.5 * (a - b) + 0.5 * (a + b + 2.0) * x);
    for n in 1..kmax {
        let nf = n as f64;
        let c1 = 2.0 * (nf + 1.0) * (nf + a + b + 1.0) * (2.0 * nf + a + b);
        let c2 = (2.0 * nf + a + b + 1.0) * (a * a - b * b);
        let c3 = (2.0 * nf + a + b) * (2.0 * nf + a + b + 1.0) * (2.0 * nf + a + b + 2.0);
        let c4 = 2.0 * (nf + a) * (nf + b) * (2.0 * nf + a + b + 2.0);
        vals.push(((c2 + c3 * x) * vals[n] - c4 * vals[n - 1]) / c1);
    }
    vals
}

/// Eigenfunction value and first two derivatives from the Jacobi series,
/// differentiated termwise through the classical relation
/// `d/dx P_k^{(a,a)} = (k + 2a + 1)/2 P_{k-1}^{(a+1,a+1)}`.
pub(crate) fn phi_with_derivatives(pair: &crate::eigensystem::EigenPair, x: f64) -> (f64, f64, f64) {
    use crate::specfun::{jacobi_norm, jacobi_orthonormal_values};
    let alpha = pair.params().alpha();
    let kmax = pair.trunc_order();
    let base = jacobi_orthonormal_values(alpha, kmax, x).unwrap();
    let up1 = jacobi_orthonormal_values(alpha + 1.0, kmax, x).unwrap();
    let up2 = jacobi_orthonormal_values(alpha + 2.0, kmax, x).unwrap();
    let (mut phi, mut dphi, mut ddphi) = (0.0, 0.0, 0.0);
    for (k, &d) in pair.jacobi_degrees().zip(pair.coeffs()) {
        let kf = k as f64;
        phi += d * base[k];
        if k >= 1 {
            let ratio = 0.5
                * (jacobi_norm(alpha + 1.0, k - 1).unwrap().log_abs
                    - jacobi_norm(alpha, k).unwrap().log_abs);
            dphi += d * 0.5 * (kf + 2.0 * alpha + 1.0) * ratio.exp() * up1[k - 1];
        }
        if k >= 2 {
            let ratio = 0.5
                * (jacobi_norm(alpha + 2.0, k - 2).unwrap().log_abs
                    - jacobi_norm(alpha, k).unwrap().log_abs);
            ddphi += d
                * 0.25
                * (kf + 2.0 * alpha + 1.0)
                * (kf + 2.0 * alpha + 2.0)
                * ratio.exp()
                * up2[k - 2];
        }
    }
    (phi, dphi, ddphi)
}

/// Monomial coefficient vectors of the orthonormal symmetric Jacobi
/// polynomials, obtained by running the orthonormal recurrence on
/// coefficient arrays instead of point values.
pub(crate) fn orthonormal_jacobi_monomial_coeffs(alpha: f64, kmax: usize) -> Vec<Vec<f64>> {
    use crate::specfun;
    let mut polys: Vec<Vec<f64>> = Vec::with_capacity(kmax + 1);
    let p0 = (-0.5 * specfun::jacobi_norm(alpha, 0).unwrap().log_abs).exp();
    polys.push(vec![p0]);
    if kmax == 0 {
        return polys;
    }
    let a1 = specfun::recurrence_offdiag(alpha, 1);
    polys.push(vec![0.0, p0 / a1]);
    for k in 1..kmax {
        let a_k = specfun::recurrence_offdiag(alpha, k);
        let a_next = specfun::recurrence_offdiag(alpha, k + 1);
        let mut next = vec![0.0; k + 2];
        for (i, &c) in polys[k].iter().enumerate() {
            next[i + 1] += c / a_next;
        }
        for (i, &c) in polys[k - 1].iter().enumerate() {
            next[i] -= a_k * c / a_next;
        }
        polys.push(next);
    }
    polys
}
