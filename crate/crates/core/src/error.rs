use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: unexpected character {found:?}")]
    Parse { position: usize, found: char },

    /// The input is well-formed but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("decode error at {path}: {message}")]
    Decode { path: String, message: String },

    /// A brute-force or series computation was asked to exceed its configured bound.
    #[error("refused: {0}")]
    Refused(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn decode(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Decode { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
