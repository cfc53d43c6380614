use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("evaluation domain: non-finite objective at probe point {index}")]
    EvaluationDomain { index: usize },
    #[error("direction is not a descent direction (g'd = {slope:e})")]
    NotDescent { slope: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid dimension {n} for `{name}`: {reason}")]
    InvalidDimension {
        name: String,
        n: usize,
        reason: &'static str,
    },
    #[error("empty benchmark matrix")]
    EmptyMatrix,
    #[error("kernel radius {radius} too large for a {width}x{height} image")]
    KernelTooLarge {
        radius: usize,
        width: usize,
        height: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
