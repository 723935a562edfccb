use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi eigensolver did not converge after {rotations} rotations (max off-diagonal {off_diagonal:e})")]
    NotConverged { rotations: usize, off_diagonal: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("observation {index} has euclidean norm {norm} > 1")]
    NormViolation { index: usize, norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} {index} out of range (valid: {valid})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        valid: String,
    },

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
