use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not unimodular: det = {0}")]
    NotUnimodular(String),
    #[error("not in the filtration group: {0}")]
    NotInGroup(String),
    #[error("level out of range: {0}")]
    BadLevel(String),
    #[error("window bound exceeded: {0}")]
    WindowExceeded(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("finite closure exceeds the configured bound of {0} elements")]
    ClosureTooLarge(usize),
    #[error("entry is not p-integral: {0}")]
    NotIntegral(String),
    #[error(transparent)]
    Core(#[from] padic_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
