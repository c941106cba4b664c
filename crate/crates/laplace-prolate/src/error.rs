//! Error type shared by all modules of the crate.

use std::fmt;

/// Errors produced by the numerical routines and the persistence layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// The symmetric tridiagonal eigensolver did not converge.
    EigenConvergence { index: usize },
    /// The Jacobi-series truncation order is too small for the requested
    /// modes; callers should enlarge it.
    TruncationInadequate { trunc_order: usize, detail: String },
    /// Catastrophic cancellation detected in a scaled sum.
    Cancellation(String),
    /// Argument outside the representable range of the evaluation scheme.
    Range(String),
    /// A user-supplied function produced a non-finite value at a node.
    NonFinite { x: f64 },
    /// Truncated spectral inversion hit an eigenvalue below the
    /// conditioning floor; the problem is ill-posed at this order.
    Conditioning { index: usize, nu: f64 },
    /// An internal consistency check failed.
    Internal(String),
    /// Cache file is malformed, has the wrong version, or fails its checksum.
    Cache(String),
    /// Underlying I/O failure.
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::EigenConvergence { index } => {
                write!(f, "tridiagonal eigensolver failed to converge at index {index}")
            }
            Error::TruncationInadequate { trunc_order, detail } => {
                write!(f, "truncation order {trunc_order} inadequate: {detail}")
            }
            Error::Cancellation(msg) => write!(f, "cancellation error: {msg}"),
            Error::Range(msg) => write!(f, "range error: {msg}"),
            Error::NonFinite { x } => write!(f, "non-finite function value at x = {x}"),
            Error::Conditioning { index, nu } => {
                write!(f, "inversion ill-conditioned: nu_{index} = {nu:e} below floor")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
            Error::Cache(msg) => write!(f, "cache error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
