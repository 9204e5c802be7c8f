use thiserror::Error;

/// Errors raised by the numerical routines and the protocol builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (symmetry violation {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Renyi order {order} outside the admissible range {range}")]
    InvalidOrder { order: f64, range: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("symmetry invariant violated (residual {0:.3e})")]
    SymmetryViolation(f64),

    #[error("support condition violated: {0}")]
    SupportViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
