use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse real literal `{0}`")]
    ParseReal(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("degenerate form: leading coefficient is zero")]
    DegenerateForm,

    #[error("precision exhausted: only {certified} partial quotients could be certified")]
    PrecisionExhausted { certified: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation budget exceeded: {needed} > {cap}")]
    Budget { needed: u128, cap: u128 },

    #[error("reduction step {step} failed: {reason}")]
    StepFailure { step: usize, reason: String },

    #[error("lifted point leaves the box: y = {y} > X = {x_max}")]
    LiftOutOfBox { y: String, x_max: u64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("need at least 3 rows with a positive minimum, got {0}")]
    InsufficientRows(usize),

    #[error("i/o: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
