use thiserror::Error;

/// Error type shared by every operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, bad indices, broken invariants.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Numerical failure (ill-conditioned input, failed decomposition).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
