use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported model file version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u64, supported: u64 },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("document `{id}` has no extractable sentences")]
    EmptyDocument { id: String },

    #[error("labeling error for document `{id}`: {message}")]
    Labeling { id: String, message: String },

    #[error("balancing error: {0}")]
    Balancing(String),

    #[error("training error: {0}")]
    Training(String),

    #[error(
        "training diverged in stage {stage}, epoch {epoch}: loss {loss} (step size {step_size}); lower the step size"
    )]
    StepSize {
        stage: u8,
        epoch: usize,
        loss: f64,
        step_size: f64,
    },

    #[error("selection error: {0}")]
    Selection(String),

    #[error("pairing error: {0}")]
    Pairing(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("every term contributes a constant; importance ratios are undefined")]
    ZeroImportance,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
