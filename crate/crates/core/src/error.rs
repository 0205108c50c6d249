use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative or factorization step did not reach its tolerance.
    #[error("numeric failure: {message} (residual {residual:.3e})")]
    NumericFailure { message: String, residual: f64 },

    #[error("failed to parse input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::NumericFailure {
            message: msg.into(),
            residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
