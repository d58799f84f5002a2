use thiserror::Error;
use warpcurv::error::GeometryError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 3 for chart-domain errors, 2 for invalid input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geometry(e) if e.is_domain() => 3,
            CliError::Geometry(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
