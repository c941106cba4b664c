//! Scalar special functions and Jacobi polynomial machinery.
//!
//! Products of Gamma, Beta and power-of-two factors that appear in the
//! eigenfunction expansions overflow double precision well before the
//! truncation orders used elsewhere in the crate, so everything that can
//! grow is carried in log space. [`LogValue`] is the (sign, ln|x|) carrier;
//! linear-space values are materialized only at final summation points.

use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI};

/// A real number stored as natural log of its magnitude plus a sign.
///
/// `sign == 0` if and only if the represented value is exactly zero;
/// multiplication and division add or subtract `log_abs` and multiply signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    /// Natural log of the magnitude. `-inf` for zero.
    pub log_abs: f64,
    /// Sign of the value: -1, 0 or +1.
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { log_abs: 0.0, sign: 1 };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    /// A positive value given by the natural log of its magnitude.
    pub fn from_ln(log_abs: f64) -> Self {
        LogValue { log_abs, sign: 1 }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Materialize in linear space. Underflows to 0 and overflows to
    /// infinity exactly as `exp` does.
    pub fn value(self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue { log_abs: self.log_abs + rhs.log_abs, sign: self.sign * rhs.sign }
    }
}

impl std::ops::Div for LogValue {
    type Output = LogValue;

    fn div(self, rhs: LogValue) -> LogValue {
        assert!(rhs.sign != 0, "LogValue division by zero");
        if self.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue { log_abs: self.log_abs - rhs.log_abs, sign: self.sign * rhs.sign }
    }
}

impl std::ops::Neg for LogValue {
    type Output = LogValue;

    fn neg(self) -> LogValue {
        LogValue { log_abs: self.log_abs, sign: -self.sign }
    }
}

/// Validated symmetric Jacobi parameter `alpha > -1` together with its
/// weight function `w(x) = (1 - x^2)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::Domain(format!("jacobi parameter must satisfy alpha > -1, got {alpha}")));
        }
        Ok(JacobiParams { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// The weight `(1 - x^2)^alpha`. Unbounded at the endpoints when
    /// `alpha < 0`; integrable for every `alpha > -1`.
    pub fn weight(self, x: f64) -> f64 {
        (1.0 - x * x).powf(self.alpha)
    }
}

const LN_PI: f64 = 1.144_729_885_849_400_2;
// Stirling asymptotic coefficients B_{2n} / (2n (2n - 1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn log_gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return LN_PI - (PI * x).sin().ln() - log_gamma_raw(1.0 - x);
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for &coef in STIRLING.iter().rev() {
        corr = corr * inv2 + coef;
    }
    corr *= inv;
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + corr - shift
}

/// Natural log of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_raw(x))
}

/// The Beta function `B(x, y)` for positive arguments, in log space.
pub fn beta(x: f64, y: f64) -> Result<LogValue> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!("beta requires positive arguments, got ({x}, {y})")));
    }
    Ok(LogValue::from_ln(log_gamma_raw(x) + log_gamma_raw(y) - log_gamma_raw(x + y)))
}

const SERIES_MAX_TERMS: usize = 800;

/// Modified Bessel function of the first kind `I_nu(x)` for `x > 0` and
/// `nu > -1`, via the ascending series, returned in log space.
///
/// Every term of the series is positive in this parameter range, so the
/// summation is cancellation free; terms are added until they fall below
/// `1e-17` of the running sum.
pub fn bessel_i(nu: f64, x: f64) -> Result<LogValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_i requires x > 0, got {x}")));
    }
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_i requires nu > -1, got {nu}")));
    }
    let log_first = nu * (x / 2.0).ln() - log_gamma_raw(nu + 1.0);
    let q = x * x / 4.0;
    let mut term = 1.0_f64;
    let mut sum = crate::util::KahanSum::new();
    sum.add(1.0);
    for m in 0..SERIES_MAX_TERMS {
        let mf = m as f64;
        term *= q / ((mf + 1.0) * (mf + nu + 1.0));
        sum.add(term);
        if term < 1e-17 * sum.value() {
            return Ok(LogValue::from_ln(log_first + sum.value().ln()));
        }
    }
    Err(Error::Internal(format!("bessel_i series did not converge for nu = {nu}, x = {x}")))
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<f64> {
    debug_assert!(z >= 0.0);
    let mut term = 1.0_f64;
    let mut sum = crate::util::KahanSum::new();
    sum.add(1.0);
    for m in 0..SERIES_MAX_TERMS {
        let mf = m as f64;
        term *= (a + mf) * z / ((b + mf) * (mf + 1.0));
        sum.add(term);
        if term.abs() < 1e-16 * sum.value().abs() {
            return Ok(sum.value());
        }
    }
    Err(Error::Internal(format!("1F1 series did not converge for a = {a}, b = {b}, z = {z}")))
}

/// Confluent hypergeometric function `1F1(a, b, z)` for `b > a > 0` and
/// real `|z| <= 100`.
///
/// Nonnegative `z` uses the ascending series directly (all terms positive,
/// no cancellation). Negative `z` is routed through the reflection
/// `1F1(a, b, z) = e^z 1F1(b - a, b, -z)` so the series argument is again
/// nonnegative.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("kummer_1f1 requires b > a > 0, got ({a}, {b})")));
    }
    if !z.is_finite() || z.abs() > 100.0 {
        return Err(Error::Domain(format!("kummer_1f1 requires |z| <= 100, got {z}")));
    }
    if z < 0.0 {
        Ok(z.exp() * kummer_series(b - a, b, -z)?)
    } else {
        kummer_series(a, b, z)
    }
}

/// Squared norm `h_k` of the degree-k symmetric Jacobi polynomial against
/// the weight `(1 - x^2)^alpha`, in log space.
pub fn jacobi_norm(alpha: f64, k: usize) -> Result<LogValue> {
    let alpha = JacobiParams::new(alpha)?.alpha();
    if k == 0 {
        // h_0 = 2^(2a+1) B(a+1, a+1); the general formula below hits
        // Gamma at nonpositive arguments when -1 < alpha <= -1/2.
        let b = beta(alpha + 1.0, alpha + 1.0)?;
        return Ok(LogValue::from_ln((2.0 * alpha + 1.0) * LN_2 + b.log_abs));
    }
    let kf = k as f64;
    let ln_h = (2.0 * alpha + 1.0) * LN_2 + 2.0 * log_gamma_raw(kf + alpha + 1.0)
        - log_gamma_raw(kf + 1.0)
        - (2.0 * kf + 2.0 * alpha + 1.0).ln()
        - log_gamma_raw(kf + 2.0 * alpha + 1.0);
    Ok(LogValue::from_ln(ln_h))
}

/// Off-diagonal entry `a_k` of the Jacobi matrix of the orthonormal
/// symmetric-Jacobi basis: `x P_k = a_{k+1} P_{k+1} + a_k P_{k-1}`.
///
/// The diagonal entries vanish by symmetry of the weight. The same
/// coefficients drive the three-term recurrence and the Golub-Welsch
/// quadrature construction.
pub fn recurrence_offdiag(alpha: f64, k: usize) -> f64 {
    debug_assert!(k >= 1);
    if k == 1 {
        // limit form; the generic expression is 0/0 at alpha = -1/2
        return 1.0 / (3.0 + 2.0 * alpha).sqrt();
    }
    let kf = k as f64;
    (kf * (kf + 2.0 * alpha) / ((2.0 * kf + 2.0 * alpha + 1.0) * (2.0 * kf + 2.0 * alpha - 1.0)))
        .sqrt()
}

/// Values of the orthonormal symmetric Jacobi polynomials of degree
/// `0..=kmax` at a point `x` inside `[-1, 1]`, by forward recurrence.
pub fn jacobi_orthonormal_values(alpha: f64, kmax: usize, x: f64) -> Result<Vec<f64>> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "jacobi_orthonormal_values requires |x| <= 1, got {x}; use jacobi_value_at_one or the analytic extension outside"
        )));
    }
    let p0 = (-0.5 * jacobi_norm(alpha, 0)?.log_abs).exp();
    let mut vals = Vec::with_capacity(kmax + 1);
    vals.push(p0);
    if kmax == 0 {
        return Ok(vals);
    }
    let mut a_prev = recurrence_offdiag(alpha, 1);
    vals.push(x * p0 / a_prev);
    for k in 1..kmax {
        let a_next = recurrence_offdiag(alpha, k + 1);
        let v = (x * vals[k] - a_prev * vals[k - 1]) / a_next;
        vals.push(v);
        a_prev = a_next;
    }
    Ok(vals)
}

/// Value of the orthonormal symmetric Jacobi polynomial at `x = 1`,
/// in log space: `Gamma(k+a+1) / (Gamma(a+1) k! sqrt(h_k))`.
///
/// This form is regular at `k = 0`, unlike the equivalent expression
/// through `1 / (k B(k, a+1))`.
pub fn jacobi_value_at_one(alpha: f64, k: usize) -> Result<LogValue> {
    let alpha = JacobiParams::new(alpha)?.alpha();
    let kf = k as f64;
    let ln = log_gamma_raw(kf + alpha + 1.0) - log_gamma_raw(alpha + 1.0) - log_gamma_raw(kf + 1.0)
        - 0.5 * jacobi_norm(alpha, k)?.log_abs;
    Ok(LogValue::from_ln(ln))
}
