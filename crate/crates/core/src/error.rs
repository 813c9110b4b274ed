use thiserror::Error;

use crate::vector::Vector;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("region is unbounded")]
    Unbounded,

    #[error("dual cone is not pointed (lineality dimension {})", .lineality.len())]
    DualNotPointed { lineality: Vec<Vector> },

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("vector is not in the span of the given generators")]
    NotInSpan,

    #[error("state is not in the maximal tensor product (separating functional {separator})")]
    NotInMaximal { separator: Vector },

    #[error("behavior is signalling")]
    Signalling,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
