use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {z} lies at a pole of the gamma function")]
    Pole { z: Complex64 },

    #[error("result overflows f64 (log-magnitude {log_magnitude:.3})")]
    Overflow { log_magnitude: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series does not converge: {0}")]
    DivergentSeries(String),

    #[error("expansion requires branch {expected}, parameters classify as {found}")]
    WrongBranch { expected: &'static str, found: String },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("oracle precision of {0} digits is not available (supported: 30..=4000)")]
    PrecisionUnavailable(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
