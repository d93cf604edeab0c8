use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Body data violates symmetry, convexity or boundedness.
    #[error("invalid body: {0}")]
    InvalidBody(String),
    /// A query parameter lies outside its admissible range.
    #[error("out of range: {0}")]
    Range(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The requested (body, dimension, mode) combination is not implemented.
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A resource cap (pairs, cells) would be exceeded.
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
