use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix must have dim >= 1")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (relative deviation {0:e})")]
    NotHermitian(f64),

    #[error("vector is not normalized (norm {0})")]
    NotUnit(f64),

    #[error("basis is not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("point {point} is not on the boundary (distance {distance:e})")]
    NotOnBoundary { point: Complex64, distance: f64 },

    #[error("insufficient resolution on the {side} side: finest scale reached {reached:e}, need {needed:e}")]
    InsufficientResolution {
        side: &'static str,
        reached: f64,
        needed: f64,
    },

    #[error("boundary curve has no samples")]
    EmptyCurve,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Document(#[from] crate::document::DocumentError),
}
