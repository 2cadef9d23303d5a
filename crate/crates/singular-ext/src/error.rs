//! Error type shared across the crate.
//!
//! Variants are grouped by how a caller should react: configuration problems
//! are permanent, spectral/pole proximity and conditioning problems are
//! numerical and depend on the requested point, and invariant failures are
//! reported by the verification suites.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent configuration (schema, dimensions, flags).
    #[error("configuration error: {0}")]
    Config(String),

    /// A vector was built against a different operator or truncation level.
    #[error("operator mismatch: {0}")]
    OperatorMismatch(String),

    /// Evaluation point too close to the truncated spectrum.
    #[error("evaluation point {z} is within {dist:.3e} of the spectrum")]
    SpectralPoint { z: Complex64, dist: f64 },

    /// Evaluation point hits a pole of a rational factor (e.g. the anchor z1).
    #[error("evaluation point {z} hits a pole: {what}")]
    Pole { z: Complex64, what: String },

    /// A truncated series did not converge within the requested tolerance.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A matrix that must be invertible is singular or too ill-conditioned.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// A structural condition required by the requested model fails.
    #[error("condition failure: {0}")]
    ConditionFailure(String),

    /// An invariant suite reported a violation.
    #[error("invariant failure: {0}")]
    InvariantFailure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line interface.
    ///
    /// 2 = configuration, 3 = condition failure, 4 = numerical failure,
    /// 5 = invariant-suite failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::OperatorMismatch(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::ConditionFailure(_) => 3,
            Error::SpectralPoint { .. }
            | Error::Pole { .. }
            | Error::Truncation(_)
            | Error::SingularMatrix(_) => 4,
            Error::InvariantFailure(_) => 5,
        }
    }
}
