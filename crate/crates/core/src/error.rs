use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample size {n} is too small (need at least {min})")]
    SampleTooSmall { n: usize, min: usize },

    #[error("observation #{index} is {value}; observations must be finite and strictly positive")]
    InvalidObservation { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to converge after {subdivisions} subdivisions (estimated error {error:e})")]
    Quadrature { error: f64, subdivisions: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown dataset `{name}` (valid names: {valid})")]
    UnknownDataset { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error was caused by the caller's input rather than a
    /// failure inside the library.
    pub fn is_user_error(&self) -> bool {
        !matches!(
            self,
            Error::Quadrature { .. } | Error::Csv(_) | Error::Json(_)
        )
    }
}
