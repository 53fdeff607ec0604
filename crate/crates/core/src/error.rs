use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("exact division failed: {0}")]
    NotDivisible(String),

    #[error("declared parity violated: {0}")]
    ParityViolation(String),

    #[error("invalid seed sequence: {0}")]
    InvalidSeed(String),

    #[error("base series too short: need length {required}, got {available}")]
    OrderStarvation { required: usize, available: usize },

    #[error("series is not a unit (constant term must be 1): {0}")]
    NotUnit(String),

    #[error("precision exhausted in {kernel}: {detail}")]
    PrecisionExhausted {
        kernel: &'static str,
        detail: String,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short stable name of the variant, for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotDivisible(_) => "not-divisible",
            Error::ParityViolation(_) => "parity-violation",
            Error::InvalidSeed(_) => "invalid-seed",
            Error::OrderStarvation { .. } => "order-starvation",
            Error::NotUnit(_) => "not-unit",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::Quadrature(_) => "quadrature",
            Error::Pole(_) => "pole",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}
