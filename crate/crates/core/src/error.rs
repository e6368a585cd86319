use thiserror::Error;

/// Errors produced by the lab.
///
/// `CapExceeded` is kept separate from every other failure so callers (the CLI
/// in particular) can report an oversized enumeration distinctly from a
/// malformed request.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} needs {required} steps, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: String,
        cap: u64,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("oracle policy does not match the graph: {0}")]
    PolicyMismatch(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
