use thiserror::Error;

/// Errors produced by state constructors, channels and witness evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown party: {0}")]
    UnknownParty(String),

    #[error("overlapping groups: {0}")]
    OverlappingGroups(String),
}

pub type Result<T> = std::result::Result<T, Error>;
