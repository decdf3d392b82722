use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid letter {letter} for rank {rank} (letters are ±1..=±{rank})")]
    InvalidLetter { letter: i64, rank: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("function is not radial: sphere {sphere} is not constant")]
    NotRadial { sphere: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("group context mismatch: rank {left} vs rank {right}")]
    ContextMismatch { left: usize, right: usize },

    #[error("malformed input at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by hitting a size cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
