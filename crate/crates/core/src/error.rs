use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision shortfall: {0}")]
    Precision(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("insufficient modes: {0}")]
    InsufficientModes(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
