use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed word text. `position` is a byte offset into the input.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    /// Malformed group definition file.
    #[error("{source_name}:{line}: {message}")]
    GroupFile {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A configured size cap (group order, word height, enumeration budget) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A lemma hypothesis did not hold for the supplied data.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal consistency assertion failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
