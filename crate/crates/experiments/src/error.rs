use annvv_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("replay mismatch in {0}")]
    ReplayMismatch(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
