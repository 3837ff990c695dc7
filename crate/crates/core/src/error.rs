use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("resolution error: scale {scale} is below twice the grid spacing {h}")]
    Resolution { scale: f64, h: f64 },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("open set has no boundary inside the grid box; extend the box")]
    NoBoundary,

    #[error("underdetermined system: {0}")]
    Underdetermined(String),

    #[error("level range exhausted: {0}")]
    Range(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
