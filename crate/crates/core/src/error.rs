use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("distribution sums to {sum}, outside the renormalization window")]
    NotNormalized { sum: f64 },

    #[error("negative probability at index {index}: {value}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("matrix deviates from Hermitian symmetry by {max_dev}")]
    NotHermitian { max_dev: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("operator is indefinite: minimum eigenvalue {min_eigenvalue}")]
    Indefinite { min_eigenvalue: f64 },

    #[error("state vector {index} has norm {norm}, expected 1")]
    NotNormalizedState { index: usize, norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("target mean energy {target} outside attainable open interval ({lo}, {hi})")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
