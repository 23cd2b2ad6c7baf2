use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of {what} at s = {at}")]
    Pole { what: &'static str, at: Complex64 },

    #[error("{what} did not converge after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("{what}: argument {arg} exceeds the exponent budget {limit}")]
    Overflow { what: &'static str, arg: f64, limit: f64 },

    #[error("kernel evaluated too close to the diagonal (sigma = {sigma})")]
    NearDiagonal { sigma: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: truncation limit {limit} reached with tail estimate {tail:e}")]
    Truncation {
        what: &'static str,
        limit: usize,
        tail: f64,
    },

    #[error("adaptive quadrature failed to reach tolerance (estimate {estimate:e})")]
    Quadrature { estimate: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NonUnitary { defect: f64 },

    #[error("radius {requested} exceeds the enumeration radius {enumerated}")]
    RadiusExceeded { requested: f64, enumerated: f64 },

    #[error("malformed specification: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
