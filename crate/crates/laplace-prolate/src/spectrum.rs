//! Eigenvalues of the weighted finite Laplace transform, evaluation of its
//! eigenfunctions inside and outside `[-1, 1]`, the operator itself, the
//! Mercer trace identity, and an independent Nystrom cross-check.
//!
//! The transform eigenvalue nu_n is recovered from the differential
//! eigenvector through the eigenrelation `(L phi_n)(x) = nu_n phi_n(x)`,
//! which admits two complementary evaluations:
//!
//! * at `x = 1`: applying the operator to the Jacobi expansion term by term
//!   maps each mode onto a modified Bessel function, giving
//!   `nu_n = sum_k d_k F_k(c) I_{k+a+1/2}(c) / c^{a+1/2}  /  phi_n(1)`.
//!   The coefficients d_k of mode n alternate in sign below the peak, so
//!   this sum loses roughly 1.5 digits per mode index and is reliable only
//!   for low modes (where it is excellent: for n = 0 every term is
//!   positive).
//! * at the center: only the constant Jacobi mode survives integration, so
//!   `nu_n phi_n(0) = sqrt(h_0) d_0` for even n and
//!   `nu_n phi_n'(0) = c sqrt(h_0) a_1 d_1` for odd n. The center is an
//!   antinode of phi_n (or of its derivative), which keeps the remaining
//!   sum cancellation free for oscillatory modes; for low modes at large
//!   bandwidth the eigenfunction is exponentially small at the center and
//!   this route degrades instead.
//!
//! Both evaluations measure their own cancellation (the magnitude of the
//! scaled sum is exactly the fraction of the leading digits that survive),
//! and the better-conditioned one is used. Mode factors overflow doubles
//! near k = 150, so every factor is formed in log space and the sums are
//! accumulated in linear space only after scaling by their largest term.

use crate::bounds;
use crate::eigensystem::{self, EigenPair, ProblemParams};
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadRule};
use crate::specfun;
use crate::util::KahanSum;
use std::f64::consts::LN_2;

/// Cap for the automatically chosen spectrum length.
pub const MAX_AUTO_MODES: usize = 120;

/// ln of the factor multiplying `d_k I_{k+a+1/2}(cx) / (cx)^{a+1/2}` in the
/// term-by-term image of the Jacobi expansion under the operator:
/// `2^{2k+3a+3/2} Gamma(k+a+3/2) B(k+a+1, k+a+1) / (sqrt(h_k) k!)`.
fn log_mode_factor(alpha: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    Ok((2.0 * kf + 3.0 * alpha + 1.5) * LN_2
        + specfun::log_gamma(kf + alpha + 1.5)?
        + specfun::beta(kf + alpha + 1.0, kf + alpha + 1.0)?.log_abs
        - 0.5 * specfun::jacobi_norm(alpha, k)?.log_abs
        - specfun::log_gamma(kf + 1.0)?)
}

/// Scaled, compensated sum of signed log-space terms. Returns the scale
/// (largest log magnitude) and the linear-space sum relative to it.
fn scaled_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let scale = terms
        .iter()
        .filter(|(_, coeff)| *coeff != 0.0)
        .map(|(log, coeff)| log + coeff.abs().ln())
        .fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return (f64::NEG_INFINITY, 0.0);
    }
    let mut acc = KahanSum::new();
    for &(log, coeff) in terms {
        if coeff != 0.0 {
            acc.add(coeff.signum() * (log + coeff.abs().ln() - scale).exp());
        }
    }
    (scale, acc.value())
}

/// One candidate evaluation of ln nu_n: the value, and the magnitude of
/// the scaled sum it came from (1.0 means no cancellation, 1e-12 means
/// twelve digits were lost).
struct NuCandidate {
    log_nu: f64,
    quality: f64,
}

/// The eigenrelation at x = 1, as a ratio of two scaled sums.
fn nu_from_edge(pair: &EigenPair, params: &ProblemParams) -> Result<Option<NuCandidate>> {
    let (c, alpha) = (params.c(), params.alpha());
    let mut numerator = Vec::with_capacity(pair.coeffs().len());
    let mut denominator = Vec::with_capacity(pair.coeffs().len());
    for (k, &d) in pair.jacobi_degrees().zip(pair.coeffs()) {
        let bessel = specfun::bessel_i(k as f64 + alpha + 0.5, c)?;
        let log_num = log_mode_factor(alpha, k)? + bessel.log_abs - (alpha + 0.5) * c.ln();
        numerator.push((log_num, d));
        denominator.push((specfun::jacobi_value_at_one(alpha, k)?.log_abs, d));
    }
    let (num_scale, num) = scaled_sum(&numerator);
    let (den_scale, den) = scaled_sum(&denominator);
    if num <= 0.0 || den <= 0.0 {
        return Ok(None);
    }
    Ok(Some(NuCandidate {
        log_nu: num_scale - den_scale + num.ln() - den.ln(),
        quality: num.abs().min(den.abs()),
    }))
}

/// The eigenrelation at the center. Integrating the kernel column at
/// x = 0 annihilates every Jacobi mode but the first, leaving
/// `nu phi_n(0) = sqrt(h_0) d_0` (even n) and, after one differentiation,
/// `nu phi_n'(0) = c sqrt(h_0) a_1 d_1` (odd n).
fn nu_from_center(pair: &EigenPair, params: &ProblemParams) -> Result<Option<NuCandidate>> {
    let (c, alpha) = (params.c(), params.alpha());
    let d_first = pair.coeffs()[0];
    if d_first == 0.0 {
        return Ok(None);
    }
    let kmax = pair.jacobi_degrees().last().unwrap_or(0);
    let (vals0, derivs0) = jacobi_values_and_derivs_at_zero(alpha, kmax)?;
    let even = pair.parity() == crate::eigensystem::Parity::Even;
    let terms: Vec<(f64, f64)> = pair
        .jacobi_degrees()
        .zip(pair.coeffs())
        .map(|(k, &d)| {
            let basis = if even { vals0[k] } else { derivs0[k] };
            (0.0, d * basis)
        })
        .collect();
    let (scale, sum) = scaled_sum(&terms);
    if sum == 0.0 {
        return Ok(None);
    }
    let center_log = scale + sum.abs().ln();
    let mut log_nu = 0.5 * specfun::jacobi_norm(alpha, 0)?.log_abs + d_first.abs().ln() - center_log;
    if !even {
        log_nu += c.ln() + specfun::recurrence_offdiag(alpha, 1).ln();
    }
    // nu > 0 forces the signs to match; a mismatch means the sum is noise
    if (d_first > 0.0) != (sum > 0.0) {
        return Ok(None);
    }
    Ok(Some(NuCandidate { log_nu, quality: sum.abs() }))
}

/// Orthonormal Jacobi values and first derivatives at x = 0 by the
/// recurrence differentiated in place.
fn jacobi_values_and_derivs_at_zero(alpha: f64, kmax: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let p0 = (-0.5 * specfun::jacobi_norm(alpha, 0)?.log_abs).exp();
    let mut vals = vec![0.0; kmax + 1];
    let mut derivs = vec![0.0; kmax + 1];
    vals[0] = p0;
    if kmax == 0 {
        return Ok((vals, derivs));
    }
    let mut a_prev = specfun::recurrence_offdiag(alpha, 1);
    derivs[1] = p0 / a_prev;
    for k in 1..kmax {
        let a_next = specfun::recurrence_offdiag(alpha, k + 1);
        vals[k + 1] = -a_prev * vals[k - 1] / a_next;
        derivs[k + 1] = (vals[k] - a_prev * derivs[k - 1]) / a_next;
        a_prev = a_next;
    }
    Ok((vals, derivs))
}

/// Natural log of the transform eigenvalue nu_n associated with `pair`.
///
/// Evaluates the eigenrelation both at the edge and at the center and
/// keeps the better-conditioned result, so the value stays relatively
/// accurate across the whole decay range, far below linear underflow.
pub fn eigenvalue_nu_log(pair: &EigenPair, params: &ProblemParams) -> Result<f64> {
    let edge = nu_from_edge(pair, params)?;
    let center = nu_from_center(pair, params)?;
    match (edge, center) {
        (Some(e), Some(c)) => Ok(if e.quality >= c.quality { e.log_nu } else { c.log_nu }),
        (Some(e), None) => Ok(e.log_nu),
        (None, Some(c)) => Ok(c.log_nu),
        (None, None) => Err(Error::Cancellation(format!(
            "both eigenvalue evaluations cancel for mode {}",
            pair.n()
        ))),
    }
}

/// The transform eigenvalue nu_n. Underflows to zero roughly 290 decades
/// below one; use [`eigenvalue_nu_log`] past that.
pub fn eigenvalue_nu(pair: &EigenPair, params: &ProblemParams) -> Result<f64> {
    Ok(eigenvalue_nu_log(pair, params)?.exp())
}

/// The edge-ratio evaluation alone: the Bessel series over the
/// eigenfunction value at x = 1. Kept as an independent cross-check of
/// [`eigenvalue_nu`]; fails with a cancellation error once the alternating
/// coefficient sums have eaten the working precision (beyond roughly
/// mode 15 to 20).
pub fn eigenvalue_nu_edge_ratio(pair: &EigenPair, params: &ProblemParams) -> Result<f64> {
    match nu_from_edge(pair, params)? {
        Some(e) if e.quality >= 1e-6 => Ok(e.log_nu.exp()),
        _ => Err(Error::Cancellation(format!(
            "edge-ratio evaluation is below six surviving digits for mode {}",
            pair.n()
        ))),
    }
}

/// Eigenfunction value inside `[-1, 1]` from the Jacobi series.
pub fn eval_phi(pair: &EigenPair, x: f64) -> Result<f64> {
    let vals = specfun::jacobi_orthonormal_values(
        pair.params().alpha(),
        pair.jacobi_degrees().last().unwrap_or(0),
        x,
    )?;
    let mut acc = KahanSum::new();
    for (k, &d) in pair.jacobi_degrees().zip(pair.coeffs()) {
        acc.add(d * vals[k]);
    }
    Ok(acc.value())
}

/// Analytic extension of the eigenfunction through its Bessel series,
/// valid for any `x != 0`. Inside the interval it agrees with
/// [`eval_phi`]; at `x = 1` the agreement is exact by construction of nu.
pub fn eval_phi_extended(pair: &EigenPair, nu_n: f64, x: f64) -> Result<f64> {
    let params = pair.params();
    let (c, alpha) = (params.c(), params.alpha());
    if x == 0.0 {
        return Err(Error::Domain(
            "the Bessel form has a removable singularity at x = 0; use eval_phi inside the interval".into(),
        ));
    }
    if x < 0.0 {
        return Ok(pair.parity().sign() * eval_phi_extended(pair, nu_n, -x)?);
    }
    if x > 50.0 / c {
        return Err(Error::Range(format!(
            "extension argument {x} exceeds the supported range 50/c = {}",
            50.0 / c
        )));
    }
    let cx = c * x;
    let mut terms = Vec::with_capacity(pair.coeffs().len());
    for (k, &d) in pair.jacobi_degrees().zip(pair.coeffs()) {
        let bessel = specfun::bessel_i(k as f64 + alpha + 0.5, cx)?;
        terms.push((log_mode_factor(alpha, k)? + bessel.log_abs - (alpha + 0.5) * cx.ln(), d));
    }
    let (scale, sum) = scaled_sum(&terms);
    if sum == 0.0 {
        return Ok(0.0);
    }
    Ok(sum.signum() * (scale + sum.abs().ln() - nu_n.ln()).exp())
}

/// Apply the operator by quadrature: `sum_i w_i e^{c x x_i} f(x_i)`.
pub fn apply_operator<F>(params: &ProblemParams, f: F, rule: &QuadRule, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let c = params.c();
    let mut acc = KahanSum::new();
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f(xi);
        if !fx.is_finite() {
            return Err(Error::NonFinite { x: xi });
        }
        acc.add(w * (c * x * xi).exp() * fx);
    }
    Ok(acc.value())
}

/// Exact trace of the operator by Mercer's theorem:
/// `sum_n nu_n = int e^{cx^2} w(x) dx = B(1/2, a+1) 1F1(1/2, a+3/2, c)`.
pub fn trace_exact(params: &ProblemParams) -> Result<f64> {
    let b = specfun::beta(0.5, params.alpha() + 1.0)?.value();
    Ok(b * specfun::kummer_1f1(0.5, params.alpha() + 1.5, params.c())?)
}

/// Discrete spectrum of the symmetrized Nystrom kernel matrix
/// `A_ij = sqrt(w_i) e^{c x_i x_j} sqrt(w_j)`; its top eigenvalues converge
/// geometrically in m to the transform eigenvalues. Serves as an oracle
/// fully independent of the tridiagonal route.
#[derive(Debug, Clone)]
pub struct NystromSpectrum {
    m: usize,
    eigenvalues: Vec<f64>,
}

impl NystromSpectrum {
    pub fn rule_size(&self) -> usize {
        self.m
    }

    /// Discrete eigenvalues, sorted decreasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

pub fn nystrom_spectrum(params: &ProblemParams, m: usize) -> Result<NystromSpectrum> {
    if m < 40 {
        return Err(Error::Domain(format!("nystrom discretization needs m >= 40, got {m}")));
    }
    let rule = quadrature::gauss_jacobi_rule(params.alpha(), m)?;
    let sqrt_w: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let c = params.c();
    let a = nalgebra::DMatrix::from_fn(m, m, |i, j| {
        sqrt_w[i] * sqrt_w[j] * (c * rule.nodes()[i] * rule.nodes()[j]).exp()
    });
    let mut eigenvalues: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(NystromSpectrum { m, eigenvalues })
}

/// The computed spectrum: eigenpairs of the commuting operator together
/// with the transform eigenvalues nu_n, strictly decreasing and positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    params: ProblemParams,
    pairs: Vec<EigenPair>,
    nu: Vec<f64>,
    log_nu: Vec<f64>,
}

impl Spectrum {
    /// Compute modes `0..=n_max`.
    pub fn compute(params: &ProblemParams, n_max: usize) -> Result<Self> {
        let pairs = eigensystem::compute_eigenpairs(params, n_max)?;
        let log_nu: Vec<f64> =
            pairs.iter().map(|p| eigenvalue_nu_log(p, params)).collect::<Result<_>>()?;
        for w in log_nu.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Internal(format!(
                    "transform eigenvalues not strictly decreasing: ln nu = {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let nu = log_nu.iter().map(|l| l.exp()).collect();
        Ok(Spectrum { params: *params, pairs, nu, log_nu })
    }

    /// Compute with an automatically chosen length: the smallest n whose
    /// decay bound falls below `1e-30 nu_0`, capped at [`MAX_AUTO_MODES`].
    pub fn compute_auto(params: &ProblemParams) -> Result<Self> {
        let head = Self::compute(params, 0)?;
        let target = head.log_nu[0] + (1e-30_f64).ln();
        let mut n_max = MAX_AUTO_MODES;
        for n in 1..=MAX_AUTO_MODES {
            if let Some(log_bound) = bounds::nu_upper_bound_log(params, n) {
                if log_bound < target {
                    n_max = n;
                    break;
                }
            }
        }
        Self::compute(params, n_max)
    }

    /// Reassemble from stored parts (cache reload). Validates ordering and
    /// consistency without altering any stored value.
    pub fn from_parts(
        params: ProblemParams,
        pairs: Vec<EigenPair>,
        nu: Vec<f64>,
        log_nu: Vec<f64>,
    ) -> Result<Self> {
        if pairs.len() != nu.len() || nu.len() != log_nu.len() {
            return Err(Error::Domain("spectrum parts have mismatched lengths".into()));
        }
        for (n, p) in pairs.iter().enumerate() {
            if p.n() != n || p.params() != &params {
                return Err(Error::Domain(format!("eigenpair {n} inconsistent with spectrum parameters")));
            }
        }
        for w in log_nu.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Domain("stored eigenvalues are not strictly decreasing".into()));
            }
        }
        Ok(Spectrum { params, pairs, nu, log_nu })
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn pair(&self, n: usize) -> &EigenPair {
        &self.pairs[n]
    }

    /// Transform eigenvalues nu_0 > nu_1 > ... > 0.
    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    /// Natural logs of the eigenvalues; finite even past linear underflow.
    pub fn log_nu(&self) -> &[f64] {
        &self.log_nu
    }

    /// Evaluate eigenfunction n at `x` inside the interval.
    pub fn phi(&self, n: usize, x: f64) -> Result<f64> {
        eval_phi(&self.pairs[n], x)
    }

    /// Values of eigenfunctions `0..=n_top` at `x`, sharing one Jacobi
    /// recurrence sweep.
    pub fn phi_values(&self, n_top: usize, x: f64) -> Result<Vec<f64>> {
        let kmax = self.pairs[..=n_top]
            .iter()
            .map(|p| p.jacobi_degrees().last().unwrap_or(0))
            .max()
            .unwrap_or(0);
        let vals = specfun::jacobi_orthonormal_values(self.params.alpha(), kmax, x)?;
        Ok(self.pairs[..=n_top]
            .iter()
            .map(|p| {
                let mut acc = KahanSum::new();
                for (k, &d) in p.jacobi_degrees().zip(p.coeffs()) {
                    acc.add(d * vals[k]);
                }
                acc.value()
            })
            .collect())
    }
}
