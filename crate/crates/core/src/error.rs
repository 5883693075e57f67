use thiserror::Error;

use crate::codes::ConditionReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("joint dimension {0} exceeds the cap of {cap}", cap = crate::tolerance::MAX_AMPLITUDES)]
    DimensionCap(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("correctability condition failed ({} violations, worst {:.3e})", .0.violations.len(), .0.worst)]
    ConditionFailed(Box<ConditionReport>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
