use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("bad level: {0}")]
    Level(String),
    #[error("outside the admitted radius range: {0}")]
    Range(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("open-set input is not a union of stars: {0}")]
    NotOpen(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Building(#[from] building::Error),
    #[error(transparent)]
    Analysis(#[from] padic_analysis::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
