//! Gauss-Jacobi quadrature for the weight `(1 - x^2)^alpha` on `[-1, 1]`.
//!
//! All inner products, norms and residuals in the crate are evaluated with
//! these rules. The weight absorbs the endpoint singularity for
//! `-1 < alpha < 0`, so integrands only ever need to be smooth.

use crate::error::{Error, Result};
use crate::specfun::{self, JacobiParams};
use crate::tridiag;
use crate::util::KahanSum;
use std::f64::consts::LN_2;

/// Rule size used by the reproduction runs and the test suites. Integrands
/// here are entire functions times the weight, so Gauss rules saturate far
/// below this for every bandwidth the crate targets.
pub const DEFAULT_POINTS: usize = 400;

/// Total mass of the weight: `int_{-1}^{1} (1-x^2)^alpha dx = 2^(2a+1) B(a+1, a+1)`.
pub fn total_mass(alpha: f64) -> f64 {
    let b = specfun::beta(alpha + 1.0, alpha + 1.0).expect("alpha > -1");
    ((2.0 * alpha + 1.0) * LN_2 + b.log_abs).exp()
}

/// An m-point Gauss-Jacobi rule: strictly increasing nodes inside `(-1, 1)`
/// and positive weights, exact for polynomials of degree `2m - 1` against
/// the weight.
#[derive(Debug, Clone)]
pub struct QuadRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Construct the m-point rule by the Golub-Welsch method: nodes are the
/// eigenvalues of the symmetric Jacobi-recurrence matrix, each weight is the
/// total mass times the squared first eigenvector component.
pub fn gauss_jacobi_rule(alpha: f64, m: usize) -> Result<QuadRule> {
    let alpha = JacobiParams::new(alpha)?.alpha();
    if m == 0 {
        return Err(Error::Domain("quadrature rule needs at least one point".into()));
    }
    if m == 1 {
        return Ok(QuadRule { alpha, nodes: vec![0.0], weights: vec![total_mass(alpha)] });
    }
    let diag = vec![0.0; m];
    let off: Vec<f64> = (1..m).map(|k| specfun::recurrence_offdiag(alpha, k)).collect();
    let (mut nodes, first) = tridiag::eigen_first_row(&diag, &off)?;
    let mass = total_mass(alpha);
    let mut weights: Vec<f64> = first.iter().map(|f| mass * f * f).collect();

    // enforce the exact symmetry the weight has
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadRule { alpha, nodes, weights })
}

/// Weighted inner product `sum_i w_i f(x_i) g(x_i)`, compensated.
pub fn inner_product<F, G>(f: F, g: G, rule: &QuadRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut acc = KahanSum::new();
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f(x);
        let gx = g(x);
        if !fx.is_finite() || !gx.is_finite() {
            return Err(Error::NonFinite { x });
        }
        acc.add(w * fx * gx);
    }
    Ok(acc.value())
}

/// Integral of `f` against the weight.
pub fn integrate<F>(f: F, rule: &QuadRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    inner_product(f, |_| 1.0, rule)
}
