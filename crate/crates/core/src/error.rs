use thiserror::Error;

/// Errors produced by the frame, solver and graph routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is empty")]
    Empty,

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e} below -{tolerance:e})")]
    NotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("matrix is singular (smallest eigenvalue {eigenvalue:e})")]
    Singular { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame vector {index} is zero")]
    ZeroVector { index: usize },

    #[error("vectors do not span the ambient space (lambda_min {lambda_min:e}, lambda_max {lambda_max:e})")]
    NotAFrame { lambda_min: f64, lambda_max: f64 },

    #[error("invalid scaling vector: {0}")]
    InvalidScaling(String),

    #[error("frame vector {index} is not unit norm (norm {norm})")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("spectrum is not simple (minimum eigengap {gap:e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("perturbation hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
