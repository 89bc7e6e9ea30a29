use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("magnification factor must be >= 1, got {0}")]
    InvalidMagnification(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported for piercing: {0}")]
    UnsupportedPiercing(String),
    #[error("instance too large for the exhaustive oracle: n = {n}, limit {limit}")]
    OracleGuard { n: usize, limit: usize },
    #[error("no box in the search family reaches measure {tau}")]
    Unreachable { tau: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
