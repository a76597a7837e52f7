use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
    #[error("outside holomorphic chart: {0}")]
    Chart(String),
    #[error("degenerate locus: {0}")]
    Degenerate(String),
    #[error("contour collision: {0}")]
    ContourCollision(String),
    #[error("pole on integration path: {0}")]
    PoleOnPath(String),
    #[error("empty admissible domain: {0}")]
    EmptyDomain(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("root bracket failure: {0}")]
    BracketFailure(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
