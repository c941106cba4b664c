//! The parity-split symmetric tridiagonal eigensystem of the second-order
//! differential operator that commutes with the weighted finite Laplace
//! transform.
//!
//! Expanding an eigenfunction in orthonormal symmetric Jacobi polynomials
//! turns the differential eigenproblem into a symmetric tridiagonal matrix
//! eigenproblem in which Jacobi degree k couples only to k +- 2, so the even
//! and odd degrees split into two independent half-size systems. Solving
//! them yields the differential eigenvalues chi_n and the expansion
//! coefficients d_k of each eigenfunction.
//!
//! Eigenvectors straight out of a QL sweep carry absolute rounding noise of
//! order machine epsilon in every component, which destroys the tiny
//! coefficients that the transform eigenvalues are later assembled from.
//! [`solve_lowest`] therefore re-derives each eigenvector from the
//! three-term recurrence run in its two stable directions (forward from
//! degree zero, backward from the truncation end) and matched at the
//! component of largest magnitude. Both directions follow the growing
//! solution, so every coefficient is produced with componentwise relative
//! accuracy down to the underflow threshold.

use crate::error::{Error, Result};
use crate::specfun;
use crate::tridiag;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

/// The parameter pair defining the operator: bandwidth `c > 0` and weight
/// exponent `alpha > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    c: f64,
    alpha: f64,
}

impl ProblemParams {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Domain(format!("bandwidth must satisfy c > 0, got {c}")));
        }
        let alpha = specfun::JacobiParams::new(alpha)?.alpha();
        Ok(ProblemParams { c, alpha })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The weight `(1 - x^2)^alpha`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x * x).powf(self.alpha)
    }
}

/// Parity class of a mode; eigenfunction n has the parity of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Offset of the first Jacobi degree in this class (0 or 1).
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// `(-1)^n` for any index n of this parity.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// One half of the parity-split system: row j corresponds to Jacobi degree
/// `k = 2j + offset`, the off-diagonal entry j couples degrees k and k + 2.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    parity: Parity,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }
}

/// Diagonal entry for Jacobi degree k:
/// `k(k + 2a + 1) - c^2 (2k(k + 2a + 1) + 2a - 1) / ((2k + 2a + 3)(2k + 2a - 1))`.
///
/// The fraction is a removable 0/0 at (k = 0, a = 1/2) and (k = 1, a = -1/2);
/// for those two rows the cancelled forms are used, valid for every a > -1.
fn diagonal_entry(c: f64, alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    let unperturbed = kf * (kf + 2.0 * alpha + 1.0);
    let c2 = c * c;
    let shift = match k {
        0 => c2 / (2.0 * alpha + 3.0),
        1 => 3.0 * c2 / (2.0 * alpha + 5.0),
        _ => {
            c2 * (2.0 * kf * (kf + 2.0 * alpha + 1.0) + 2.0 * alpha - 1.0)
                / ((2.0 * kf + 2.0 * alpha + 3.0) * (2.0 * kf + 2.0 * alpha - 1.0))
        }
    };
    unperturbed - shift
}

/// Coupling between Jacobi degrees k and k + 2:
/// `-c^2 sqrt((k+1)(k+2)(k+2a+1)(k+2a+2)) / ((2k+2a+3) sqrt((2k+2a+5)(2k+2a+1)))`.
///
/// Stored once; the coefficient produced by the row of degree k + 2 towards
/// degree k is the same expression, so the matrix is symmetric exactly.
fn coupling_entry(c: f64, alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    let c2 = c * c;
    if k == 0 {
        // cancelled form, regular at alpha = -1/2
        return -c2 * (2.0 * (2.0 * alpha + 2.0) / (2.0 * alpha + 5.0)).sqrt()
            / (2.0 * alpha + 3.0);
    }
    let num = (kf + 1.0) * (kf + 2.0) * (kf + 2.0 * alpha + 1.0) * (kf + 2.0 * alpha + 2.0);
    let den = (2.0 * kf + 2.0 * alpha + 5.0) * (2.0 * kf + 2.0 * alpha + 1.0);
    -c2 / (2.0 * kf + 2.0 * alpha + 3.0) * (num / den).sqrt()
}

/// Assemble one parity class of the eigensystem with `size` rows.
pub fn build_tridiagonal(params: &ProblemParams, parity: Parity, size: usize) -> TridiagonalSystem {
    assert!(size >= 2, "tridiagonal system needs at least two rows");
    let (c, alpha) = (params.c(), params.alpha());
    let diag = (0..size).map(|j| diagonal_entry(c, alpha, 2 * j + parity.offset())).collect();
    let offdiag = (0..size - 1).map(|j| coupling_entry(c, alpha, 2 * j + parity.offset())).collect();
    TridiagonalSystem { parity, diag, offdiag }
}

/// One eigenpair of the commuting operator: differential eigenvalue chi and
/// the Jacobi expansion coefficients of the eigenfunction.
///
/// `coeffs[j]` multiplies the orthonormal Jacobi polynomial of degree
/// `2j + parity.offset()`; degrees of the other parity are absent by
/// construction. The coefficients are unit-norm and signed so that the
/// eigenfunction is positive at x = 1.
#[derive(Debug, Clone)]
pub struct EigenPair {
    n: usize,
    chi: f64,
    parity: Parity,
    coeffs: Vec<f64>,
    trunc_order: usize,
    params: ProblemParams,
}

impl EigenPair {
    /// Reassemble a pair from stored fields, e.g. when reading a cache.
    /// Checks normalization and parity consistency but does not alter the
    /// stored values.
    pub fn from_parts(
        n: usize,
        chi: f64,
        parity: Parity,
        coeffs: Vec<f64>,
        trunc_order: usize,
        params: ProblemParams,
    ) -> Result<Self> {
        if parity != Parity::of_index(n) {
            return Err(Error::Domain(format!("mode {n} cannot have parity {parity:?}")));
        }
        let norm: f64 = coeffs.iter().map(|d| d * d).sum();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "coefficients of mode {n} are not unit norm (sum of squares {norm})"
            )));
        }
        if coeffs.is_empty() || 2 * (coeffs.len() - 1) + parity.offset() > trunc_order {
            return Err(Error::Domain(format!("coefficient count inconsistent with truncation order for mode {n}")));
        }
        Ok(EigenPair { n, chi, parity, coeffs, trunc_order, params })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc_order
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    /// Jacobi degrees carried by `coeffs`, in order.
    pub fn jacobi_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        let offset = self.parity.offset();
        (0..self.coeffs.len()).map(move |j| 2 * j + offset)
    }

    /// Coefficient of Jacobi degree k; zero for the opposite parity and
    /// beyond the stored truncation.
    pub fn coeff(&self, k: usize) -> f64 {
        if k % 2 != self.parity.offset() {
            return 0.0;
        }
        self.coeffs.get(k / 2).copied().unwrap_or(0.0)
    }
}

/// Hard cap on the Jacobi truncation order.
pub const MAX_TRUNCATION: usize = 4096;

/// Largest supported mode index.
pub const MAX_MODE: usize = 200;

/// Initial Jacobi truncation order for modes up to `n_max`:
/// `max(2 n_max + 30, ceil(e c / 2) + 40)`. The tail of every requested
/// eigenvector decays super-exponentially past both floors; adequacy is
/// still verified (and the order doubled if needed) by the solver.
pub fn choose_truncation(params: &ProblemParams, n_max: usize) -> usize {
    let floor_modes = 2 * n_max + 30;
    let floor_bandwidth = (E * params.c() / 2.0).ceil() as usize + 40;
    floor_modes.max(floor_bandwidth)
}

const ADEQUACY_TOL: f64 = 1e-14;
// magnitude guard for the directional recurrences
const RESCALE_LIMIT: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

/// The `count` algebraically smallest eigenvalues of the system with
/// orthonormal eigenvectors, eigenvalues strictly increasing.
///
/// Fails with [`Error::TruncationInadequate`] when the trailing quarter of
/// any returned eigenvector is not negligible, which tells the caller to
/// enlarge the system.
pub fn solve_lowest(system: &TridiagonalSystem, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let size = system.size();
    if count == 0 {
        return Ok(Vec::new());
    }
    if count > size {
        return Err(Error::Domain(format!("requested {count} eigenpairs from a system of size {size}")));
    }
    let raw = tridiag::eigen_full(&system.diag, &system.offdiag)?;
    let mut out = Vec::with_capacity(count);
    for (chi_raw, vec_raw) in raw.into_iter().take(count) {
        let refined = refine_eigenpair(&system.diag, &system.offdiag, chi_raw, &vec_raw);
        out.push(refined);
    }
    for w in out.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Internal(format!(
                "tridiagonal eigenvalues not strictly increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    let tail_start = size - size / 4;
    for (chi, v) in &out {
        let tail_max = v[tail_start..].iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
        if tail_max >= ADEQUACY_TOL {
            return Err(Error::TruncationInadequate {
                trunc_order: 2 * (size - 1) + system.parity.offset(),
                detail: format!(
                    "eigenvector for chi = {chi} has tail magnitude {tail_max:.2e}; enlarge the system"
                ),
            });
        }
    }
    Ok(out)
}

/// Re-derive an eigenvector from the recurrence in its stable directions,
/// then tighten the eigenvalue with a Rayleigh quotient and repeat once.
fn refine_eigenpair(diag: &[f64], off: &[f64], chi0: f64, raw: &[f64]) -> (f64, Vec<f64>) {
    let peak = argmax_abs(raw);
    let v1 = shoot(diag, off, chi0, peak);
    let chi1 = rayleigh_quotient(diag, off, &v1);
    let v2 = shoot(diag, off, chi1, argmax_abs(&v1));
    (chi1, v2)
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

fn rayleigh_quotient(diag: &[f64], off: &[f64], v: &[f64]) -> f64 {
    let mut acc = crate::util::KahanSum::new();
    for i in 0..v.len() {
        acc.add(diag[i] * v[i] * v[i]);
        if i + 1 < v.len() {
            acc.add(2.0 * off[i] * v[i] * v[i + 1]);
        }
    }
    acc.value()
}

/// Two-sided recurrence solve of `(T - chi) v = 0`.
///
/// Head: forward from row 0, where the eigenvector grows towards its peak,
/// so forward recursion tracks the dominant solution. Tail: backward from
/// the last row for the same reason. The halves are matched at `peak` and
/// the row equation at the junction is the only one not enforced; its
/// residual is of the order of the eigenvalue error. Entries more than
/// ~500 decades below the peak underflow to zero, which is far below
/// every tolerance in the crate.
fn shoot(diag: &[f64], off: &[f64], chi: f64, peak: usize) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let jm = peak.min(n - 2);

    let mut head = vec![0.0; jm + 1];
    head[0] = 1.0;
    if jm >= 1 {
        head[1] = (chi - diag[0]) * head[0] / off[0];
    }
    for j in 1..jm {
        head[j + 1] = ((chi - diag[j]) * head[j] - off[j - 1] * head[j - 1]) / off[j];
        if head[j + 1].abs() > RESCALE_LIMIT {
            for h in head[..=j + 1].iter_mut() {
                *h *= RESCALE_FACTOR;
            }
        }
    }

    let tail_len = n - jm;
    let mut tail = vec![0.0; tail_len];
    tail[tail_len - 1] = 1.0;
    if tail_len >= 2 {
        tail[tail_len - 2] = (chi - diag[n - 1]) * tail[tail_len - 1] / off[n - 2];
    }
    for j in ((jm + 1)..(n - 1)).rev() {
        let t = j - jm;
        tail[t - 1] = ((chi - diag[j]) * tail[t] - off[j] * tail[t + 1]) / off[j - 1];
        if tail[t - 1].abs() > RESCALE_LIMIT {
            for x in tail[t - 1..].iter_mut() {
                *x *= RESCALE_FACTOR;
            }
        }
    }

    let mut v = vec![0.0; n];
    let scale = tail[0] / head[jm];
    for j in 0..jm {
        v[j] = head[j] * scale;
    }
    v[jm..].copy_from_slice(&tail);

    // scale by the peak before squaring so the norm cannot overflow
    let vmax = v.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
    for x in &mut v {
        *x /= vmax;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

/// Eigenpairs for modes `0..=n_max`, assembled by interleaving the even and
/// odd solves in order of increasing chi. The truncation order starts at
/// [`choose_truncation`] and doubles until the adequacy check passes.
pub fn compute_eigenpairs(params: &ProblemParams, n_max: usize) -> Result<Vec<EigenPair>> {
    if n_max > MAX_MODE {
        return Err(Error::Domain(format!("mode index {n_max} exceeds the supported maximum {MAX_MODE}")));
    }
    let mut k_trunc = choose_truncation(params, n_max);
    loop {
        match assemble(params, n_max, k_trunc) {
            Err(Error::TruncationInadequate { .. }) if k_trunc < MAX_TRUNCATION => {
                k_trunc = (2 * k_trunc).min(MAX_TRUNCATION);
            }
            other => return other,
        }
    }
}

fn assemble(params: &ProblemParams, n_max: usize, k_trunc: usize) -> Result<Vec<EigenPair>> {
    let n_even = n_max / 2 + 1;
    let n_odd = (n_max + 1) / 2;

    let even_size = k_trunc / 2 + 1;
    let even_sys = build_tridiagonal(params, Parity::Even, even_size);
    let even = solve_lowest(&even_sys, n_even)?;

    let odd = if n_odd > 0 {
        let odd_size = k_trunc.div_ceil(2);
        let odd_sys = build_tridiagonal(params, Parity::Odd, odd_size);
        solve_lowest(&odd_sys, n_odd)?
    } else {
        Vec::new()
    };

    // merge by chi; the merged order must alternate parity
    let mut pairs = Vec::with_capacity(n_max + 1);
    let (mut ie, mut io) = (0, 0);
    for n in 0..=n_max {
        let take_even = match (even.get(ie), odd.get(io)) {
            (Some(e), Some(o)) => e.0 <= o.0,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!("ran out of eigenpairs before n_max"),
        };
        let (parity, (chi, vec)) = if take_even {
            ie += 1;
            (Parity::Even, even[ie - 1].clone())
        } else {
            io += 1;
            (Parity::Odd, odd[io - 1].clone())
        };
        if parity != Parity::of_index(n) {
            return Err(Error::Internal(format!(
                "chi ordering violates parity interlacing at mode {n} (chi = {chi})"
            )));
        }
        pairs.push(finalize_pair(params, n, chi, parity, vec, k_trunc)?);
    }
    Ok(pairs)
}

/// Fix the sign so the eigenfunction is positive at x = 1.
fn finalize_pair(
    params: &ProblemParams,
    n: usize,
    chi: f64,
    parity: Parity,
    mut coeffs: Vec<f64>,
    k_trunc: usize,
) -> Result<EigenPair> {
    let mut at_one = crate::util::KahanSum::new();
    for (j, &d) in coeffs.iter().enumerate() {
        let k = 2 * j + parity.offset();
        let p1 = specfun::jacobi_value_at_one(params.alpha(), k)?.value();
        at_one.add(d * p1);
    }
    if at_one.value() == 0.0 {
        return Err(Error::Internal(format!("eigenfunction {n} vanishes at x = 1")));
    }
    if at_one.value() < 0.0 {
        for d in &mut coeffs {
            *d = -*d;
        }
    }
    EigenPair::from_parts(n, chi, parity, coeffs, k_trunc, *params)
}
