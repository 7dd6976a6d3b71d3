use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("tail unknown beyond x = {known} (requested {requested})")]
    TailUnknown { known: f64, requested: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("budget exceeded: {what} needs {required}, budget is {budget}")]
    Budget {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("level {level} is beyond the specified levels (no periodic tail declared)")]
    LevelOutOfRange { level: usize },

    #[error("invalid fractal: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("bracket [{lo}, {hi}] does not straddle the convergence boundary: {reason}")]
    NotStraddling { lo: f64, hi: f64, reason: String },

    #[error("iteration cap exceeded in {0}")]
    NoConvergence(&'static str),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
