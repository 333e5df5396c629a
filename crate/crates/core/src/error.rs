use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis dimension ({cutoff}+1)^{modes} overflows usize")]
    DimensionOverflow { modes: usize, cutoff: usize },
    #[error("invalid basis: modes and cutoff must both be at least 1 (got modes={modes}, cutoff={cutoff})")]
    InvalidBasis { modes: usize, cutoff: usize },
    #[error("mode index {mode} out of range 1..={modes}")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("cutoff {cutoff} too small: truncation tail {tail:.3e} exceeds {bound:.3e}; need cutoff >= {required}")]
    CutoffTooSmall { cutoff: usize, tail: f64, bound: f64, required: usize },
    #[error("cutoff {cutoff} leaves no margin for degree {degree}")]
    InsufficientMargin { cutoff: usize, degree: u32 },
    #[error("matrix exponential did not converge: {0}")]
    ExpmFailed(String),
    #[error("implicit midpoint solve failed at step {step} (t = {time}): residual {residual:.3e} after {iterations} iterations")]
    ImplicitSolveFailed { step: usize, time: f64, residual: f64, iterations: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Context { context: String, #[source] source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context { context: context.into(), source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
