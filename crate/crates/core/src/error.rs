use thiserror::Error;

use crate::series::SeriesError;

/// Errors raised by the family catalog.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Argument(String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("radius {r} outside the admissible range [0, {limit})")]
    Domain { r: f64, limit: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}
