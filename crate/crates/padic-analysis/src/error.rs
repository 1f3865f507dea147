use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("coordinate is not integral: {0}")]
    NotIntegral(String),
    #[error("radius out of range: {0}")]
    BadRadius(String),
    #[error("not a group member: {0}")]
    NotMember(String),
    #[error("levels are incompatible: {0}")]
    Level(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Core(#[from] padic_core::Error),
    #[error(transparent)]
    Building(#[from] building::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
