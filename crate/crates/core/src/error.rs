use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("inconsistent metadata: {check}")]
    MetaInconsistent { check: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("classification refused: {0}")]
    ClassificationRefused(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
