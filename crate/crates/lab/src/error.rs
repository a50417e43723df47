use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Core(#[from] perturb_core::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("need at least {needed} distinct x values, have {have}")]
    InsufficientPoints { needed: usize, have: usize },
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
