use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A coefficient outside the stored range was required.
    #[error("precision exceeded: {0}")]
    Precision(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A structural invariant (class dependence, evenness, ...) was violated.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("search cap exhausted after {0} steps")]
    CapExhausted(u64),
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
