use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: bad vertex ids, wrong set sizes, duplicates.
    #[error("input error: {0}")]
    Input(String),

    /// Well-formed input outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A Hall witness was requested but the target set is coverable.
    #[error("a matching covers the target set: {matching:?}")]
    Coverable { matching: Vec<[u32; 2]> },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            message: e.to_string(),
        }
    }
}
