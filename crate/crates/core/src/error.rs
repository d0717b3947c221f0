use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown setting {0}")]
    UnknownSetting(usize),
    #[error("outcome {outcome} out of range for setting {setting} ({count} outcomes)")]
    OutcomeOutOfRange {
        setting: usize,
        outcome: usize,
        count: usize,
    },
    #[error("outcome {outcome} of setting {setting} is the dropped outcome")]
    DroppedOutcome { setting: usize, outcome: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("scenario file {path}: {message}")]
    ScenarioFile { path: String, message: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is indefinite (minimum eigenvalue {min_eigenvalue:e})")]
    Indefinite { min_eigenvalue: f64 },
    #[error("problem size {size} exceeds the interior-point cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("solver did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("solution carries no dual certificate")]
    MissingDual,
    #[error("search space of {size} exceeds the enumeration cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("probability {value:e} for {label} lies outside [0, 1]")]
    ProbabilityOutOfRange { label: String, value: f64 },
    #[error("moment matrix is infeasible: class residual {residual:e}")]
    Infeasible { residual: f64 },
    #[error("invalid realization: {0}")]
    InvalidRealization(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
