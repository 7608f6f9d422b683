use thiserror::Error;

use crate::theory::Theory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theory mismatch: {left} vs {right}")]
    TheoryMismatch { left: Theory, right: Theory },

    #[error("object mismatch: expected dimension {expected}, found {found}")]
    ObjectMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid entry: {0}")]
    InvalidEntry(String),

    #[error("{theory} has no {family}: {reason}")]
    UnsupportedFamily {
        theory: Theory,
        family: &'static str,
        reason: &'static str,
    },

    #[error("unsupported operation for {theory}: {what}")]
    Unsupported { theory: Theory, what: String },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("square does not commute")]
    NotCommuting,

    #[error("leg not in required class: {0}")]
    LegClass(String),

    #[error("search too large: {0}")]
    SizeGuard(String),

    #[error("not dilations of the same map (choi deviation {deviation:e})")]
    DilationMismatch { deviation: f64 },

    #[error("ancilla of the first dilation ({first}) exceeds that of the second ({second})")]
    AncillaOrder { first: usize, second: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Malformed input, as opposed to a well-formed request the theory rejects.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Shape(_) | Error::InvalidEntry(_)
        )
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
