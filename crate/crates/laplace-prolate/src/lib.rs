//! Spectral analysis of the weighted finite Laplace transform operator
//! on the interval `[-1, 1]`.
//!
//! For a bandwidth `c > 0` and a weight exponent `alpha > -1`, the operator
//! acts on `L^2([-1, 1], w)` with `w(y) = (1 - y^2)^alpha` by
//!
//! ```text
//! (L f)(x) = int_{-1}^{1} e^{c x y} f(y) w(y) dy.
//! ```
//!
//! Its kernel is symmetric and positive definite, so the eigenvalues nu_n
//! are positive and simple and decay super-exponentially, while the largest
//! one grows like `e^c`. The eigenfunctions phi_n form an orthonormal basis
//! of the weighted space, have the parity of n, extend analytically to the
//! whole real line, and are particularly effective for approximating and
//! inverting functions in the range of the operator.
//!
//! The crate computes this spectrum through the classical commuting-operator
//! route: a second-order differential operator shares the eigenfunctions,
//! and expanding them in orthonormal symmetric Jacobi polynomials reduces
//! everything to a parity-split symmetric tridiagonal eigenproblem. The
//! transform eigenvalues are then recovered in log space from a Bessel
//! series, which keeps them relatively accurate across hundreds of decades
//! of decay. A Nystrom discretization of the integral equation provides an
//! independent cross-check, and closed-form inequalities for the decay of
//! eigenvalues, coefficients and eigenfunction sups are available for
//! validation.
//!
//! Start with [`ProblemParams`] and [`Spectrum`]:
//!
//! ```
//! use laplace_prolate::{ProblemParams, Spectrum};
//!
//! let params = ProblemParams::new(std::f64::consts::PI, 0.0)?;
//! let spectrum = Spectrum::compute(&params, 10)?;
//! assert!(spectrum.nu()[0] > spectrum.nu()[1]);
//! # Ok::<(), laplace_prolate::Error>(())
//! ```
//!
//! The `examples/` directory holds one runnable program per capability:
//! eigenvalue tables, decay curves, the trace identity, eigenfunction
//! profiles and bounds, analytic extension, spectral approximation,
//! transform inversion, the Nystrom cross-check, and spectrum caching.

pub mod approximation;
pub mod bounds;
pub mod cli;
pub mod eigensystem;
pub mod error;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;

mod tridiag;
mod util;

#[cfg(test)]
mod testutil;

pub use eigensystem::{EigenPair, Parity, ProblemParams, TridiagonalSystem};
pub use error::{Error, Result};
pub use quadrature::QuadRule;
pub use spectrum::{NystromSpectrum, Spectrum};
