use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("resolution too coarse: axis {axis} needs at least {required} cells for |x| <= {max_x}")]
    ResolutionTooCoarse { axis: usize, required: usize, max_x: f64 },

    #[error("separation violated: {0}")]
    SeparationViolated(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("empty sampling")]
    EmptySampling,

    #[error("nonpositive value in scaling series at R = {0}")]
    NonPositiveValue(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("fast evaluator diverged from the oracle: relative error {rel} at point {point:?}")]
    OracleMismatch { rel: f64, point: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, NumericsError>;
