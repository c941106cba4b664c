//! Spectral approximation in the eigenfunction basis, truncated inversion
//! of the transform, a closed-form transform pair for end-to-end testing,
//! and the plain Jacobi-polynomial projection used as a comparator.

use crate::eigensystem::ProblemParams;
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadRule};
use crate::spectrum::Spectrum;
use crate::util::KahanSum;

/// Eigenvalues below this are treated as numerically invertible no further;
/// the truncated inverse refuses to divide by them.
pub const INVERSION_FLOOR: f64 = 1e-250;

/// Which orthonormal family a coefficient vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Phi,
    Jacobi,
}

/// How a coefficient vector was obtained. Measured coefficients carry the
/// quadrature noise of the integrand they were extracted from; derived
/// ones inherit the relative accuracy of the source series and the
/// eigenvalues, which matters once the transform image has decayed below
/// the noise of any direct measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Inner products of a concrete function against the basis.
    Measured,
    /// Scaled termwise from another series through the eigenvalues.
    Derived,
}

/// Coefficients of a function in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct ExpansionSeries {
    basis: Basis,
    provenance: Provenance,
    coeffs: Vec<f64>,
    params: ProblemParams,
}

impl ExpansionSeries {
    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Expand `f` over the first `n_terms` eigenfunctions: `b_k = <f, phi_k>`.
pub fn expand<F>(f: F, spectrum: &Spectrum, rule: &QuadRule, n_terms: usize) -> Result<ExpansionSeries>
where
    F: Fn(f64) -> f64,
{
    if n_terms > spectrum.len() {
        return Err(Error::Domain(format!(
            "requested {n_terms} coefficients but the spectrum holds {} modes",
            spectrum.len()
        )));
    }
    let mut acc: Vec<KahanSum> = vec![KahanSum::new(); n_terms];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite { x });
        }
        if n_terms == 0 {
            continue;
        }
        let phis = spectrum.phi_values(n_terms - 1, x)?;
        for (k, &p) in phis.iter().enumerate() {
            acc[k].add(w * fx * p);
        }
    }
    Ok(ExpansionSeries {
        basis: Basis::Phi,
        provenance: Provenance::Measured,
        coeffs: acc.into_iter().map(|a| a.value()).collect(),
        params: *spectrum.params(),
    })
}

/// Coefficients of the transform image: `b_k(L f) = nu_k b_k(f)`.
pub fn forward_coeffs(series_f: &ExpansionSeries, spectrum: &Spectrum) -> Result<ExpansionSeries> {
    check_compatible(series_f, spectrum)?;
    let coeffs = series_f.coeffs.iter().zip(spectrum.nu()).map(|(b, nu)| b * nu).collect();
    Ok(ExpansionSeries {
        basis: Basis::Phi,
        provenance: Provenance::Derived,
        coeffs,
        params: series_f.params,
    })
}

/// Partial sum `sum_{k<=n} b_k phi_k(x)`.
pub fn project(series: &ExpansionSeries, spectrum: &Spectrum, n: usize, x: f64) -> Result<f64> {
    check_compatible(series, spectrum)?;
    if n >= series.len() {
        return Err(Error::Domain(format!("projection order {n} exceeds stored coefficients {}", series.len())));
    }
    let phis = spectrum.phi_values(n, x)?;
    let mut acc = KahanSum::new();
    for k in 0..=n {
        acc.add(series.coeffs[k] * phis[k]);
    }
    Ok(acc.value())
}

/// Truncated spectral inverse `sum_{k<=n_trunc} (b_k(g)/nu_k) phi_k(x)`.
///
/// The division surfaces the ill-posedness of inversion: eigenvalues below
/// [`INVERSION_FLOOR`] abort with a conditioning error instead of
/// amplifying noise without bound.
pub fn invert(
    series_g: &ExpansionSeries,
    spectrum: &Spectrum,
    n_trunc: usize,
    x: f64,
) -> Result<f64> {
    check_compatible(series_g, spectrum)?;
    if n_trunc >= series_g.len() {
        return Err(Error::Domain(format!(
            "inversion order {n_trunc} exceeds stored coefficients {}",
            series_g.len()
        )));
    }
    for k in 0..=n_trunc {
        let nu = spectrum.nu()[k];
        if !(nu > INVERSION_FLOOR) {
            return Err(Error::Conditioning { index: k, nu });
        }
    }
    let phis = spectrum.phi_values(n_trunc, x)?;
    let mut acc = KahanSum::new();
    for k in 0..=n_trunc {
        acc.add(series_g.coeffs[k] / spectrum.nu()[k] * phis[k]);
    }
    Ok(acc.value())
}

fn check_compatible(series: &ExpansionSeries, spectrum: &Spectrum) -> Result<()> {
    if series.basis != Basis::Phi {
        return Err(Error::Domain("series is not in the eigenfunction basis".into()));
    }
    if series.params() != spectrum.params() {
        return Err(Error::Domain("series and spectrum have different parameters".into()));
    }
    if series.len() > spectrum.len() {
        return Err(Error::Domain("series has more coefficients than the spectrum has modes".into()));
    }
    Ok(())
}

/// The closed-form transform pair used by the reproduction runs:
/// `f(t) = e^{bt} sin(at)` and its image `g = L f` under the unweighted
/// (alpha = 0) transform at bandwidth c.
#[derive(Debug, Clone, Copy)]
pub struct TestPair {
    a: f64,
    beta: f64,
    c: f64,
}

/// Build the pair, rejecting the singular configuration where the closed
/// form's denominator `a^2 + (cx + beta)^2` can vanish on the interval.
pub fn test_pair(a: f64, beta: f64, c: f64) -> Result<TestPair> {
    if !a.is_finite() || !beta.is_finite() || !(c > 0.0) {
        return Err(Error::Domain("test pair needs finite a, beta and c > 0".into()));
    }
    if a == 0.0 && beta.abs() <= c {
        return Err(Error::Domain(
            "singular configuration: a = 0 with beta = -cx attained on [-1, 1]".into(),
        ));
    }
    Ok(TestPair { a, beta, c })
}

impl TestPair {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The source function `f(t) = e^{beta t} sin(a t)`.
    pub fn f(&self, t: f64) -> f64 {
        (self.beta * t).exp() * (self.a * t).sin()
    }

    /// The image `g = L f` in closed form.
    pub fn g(&self, x: f64) -> f64 {
        let (a, b, c) = (self.a, self.beta, self.c);
        let u = c * x + b;
        let denom = a * a + b * b + c * c * x * x + 2.0 * c * x * b;
        2.0 / denom * (u * a.sin() * u.cosh() - a * a.cos() * u.sinh())
    }
}

/// Projection onto the span of the first `n + 1` orthonormal Jacobi
/// polynomials, the classical comparator scheme.
pub fn jacobi_expand<G>(g: G, alpha: f64, n: usize, rule: &QuadRule) -> Result<ExpansionSeries>
where
    G: Fn(f64) -> f64,
{
    let mut acc: Vec<KahanSum> = vec![KahanSum::new(); n + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let gx = g(x);
        if !gx.is_finite() {
            return Err(Error::NonFinite { x });
        }
        let vals = crate::specfun::jacobi_orthonormal_values(alpha, n, x)?;
        for (k, &v) in vals.iter().enumerate() {
            acc[k].add(w * gx * v);
        }
    }
    Ok(ExpansionSeries {
        basis: Basis::Jacobi,
        provenance: Provenance::Measured,
        coeffs: acc.into_iter().map(|a| a.value()).collect(),
        // alpha is what matters here; c is irrelevant for the Jacobi basis
        params: ProblemParams::new(1.0, alpha)?,
    })
}

/// Evaluate a Jacobi-basis series at `x`.
pub fn jacobi_eval(series: &ExpansionSeries, x: f64) -> Result<f64> {
    if series.basis != Basis::Jacobi {
        return Err(Error::Domain("series is not in the Jacobi basis".into()));
    }
    let n = series.len() - 1;
    let vals = crate::specfun::jacobi_orthonormal_values(series.params().alpha(), n, x)?;
    let mut acc = KahanSum::new();
    for (c, v) in series.coeffs.iter().zip(&vals) {
        acc.add(c * v);
    }
    Ok(acc.value())
}

/// One-shot Jacobi projection `Pi_n(g)(x)`.
pub fn jacobi_project<G>(g: G, alpha: f64, n: usize, rule: &QuadRule, x: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let series = jacobi_expand(g, alpha, n, rule)?;
    jacobi_eval(&series, x)
}

/// Equispaced grid on `[-1, 1]`, exactly symmetric about zero. Used for
/// every sup-norm measurement in the crate.
pub fn symmetric_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let n = points;
    let mut grid = vec![0.0; n];
    let h = 2.0 / (n - 1) as f64;
    for i in 0..n / 2 {
        let x = 1.0 - h * i as f64;
        grid[i] = -x;
        grid[n - 1 - i] = x;
    }
    grid
}

/// Sup distance between two functions over a `points`-point symmetric grid.
pub fn sup_error_on_grid<F, G>(f: F, g: G, points: usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    symmetric_grid(points).into_iter().map(|x| (f(x) - g(x)).abs()).fold(0.0, f64::max)
}

/// Weighted L2 distance between two functions under the rule's weight.
pub fn l2_error<F, G>(f: F, g: G, rule: &QuadRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let d = |x: f64| f(x) - g(x);
    Ok(quadrature::inner_product(&d, &d, rule)?.max(0.0).sqrt())
}
