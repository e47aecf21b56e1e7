use thiserror::Error;

/// Failures surfaced by the library.
///
/// The variants map onto the CLI exit codes: usage and validation errors are
/// caller mistakes, arithmetic and precision errors come out of truncated
/// series computations, resource errors out of configured bounds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("precision exhausted: {message} (rerun with truncation at least {required_trunc})")]
    Precision { message: String, required_trunc: u32 },
    #[error("resource bound exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn arithmetic(msg: impl Into<String>) -> Self {
        Error::Arithmetic(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Validation(_) => 2,
            Error::Arithmetic(_) | Error::Precision { .. } => 3,
            Error::Resource(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
