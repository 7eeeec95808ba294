use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("market constant k must be positive and finite, got {0}")]
    InvalidMarket(f64),

    #[error("{name} must be a nonnegative finite number, got {value}")]
    NegativeOrNonFinite { name: &'static str, value: f64 },

    #[error("phase {name} must be finite, got {value}")]
    InvalidPhase { name: &'static str, value: f64 },

    #[error("covariance matrix must be square with even dimension, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("symplectic eigenvalue {0} violates the uncertainty bound mu >= 1/2")]
    BelowUncertainty(f64),

    #[error("Fock truncation must be at least 2, got {0}")]
    TruncationTooSmall(usize),

    #[error("truncation leak {leak:e} exceeds tolerance {tolerance:e}")]
    TruncationLeak { leak: f64, tolerance: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("golden data: {0}")]
    Golden(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeOrNonFinite { name, value })
    }
}
