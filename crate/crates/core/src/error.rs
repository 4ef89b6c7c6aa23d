use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value at {0}")]
    NonFiniteValue(String),

    #[error("panel too small: need N >= {min_units} and T >= {min_periods}, got N = {n_units}, T = {n_periods}")]
    TooSmall {
        n_units: usize,
        n_periods: usize,
        min_units: usize,
        min_periods: usize,
    },

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("factor proxies are rank deficient: rank {rank} < {required}")]
    RankDeficientProxies { rank: usize, required: usize },

    #[error("residual row {unit} has no time variation")]
    DegenerateSeries { unit: usize },

    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("zero residual variance for unit {unit}")]
    ZeroVariance { unit: usize },

    #[error("estimator output carries no loading estimates")]
    MissingLoadings,

    #[error("invalid residual matrix: {0}")]
    InvalidResiduals(String),

    #[error("invalid interval [{a}, {b})")]
    BadInterval { a: f64, b: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no input values")]
    EmptyInput,

    #[error("{failed} of {total} replications failed")]
    CellFailed { failed: usize, total: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("panel is unbalanced: {0}")]
    UnbalancedPanel(String),

    #[error("no units left after balancing")]
    EmptyAfterBalancing,

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
