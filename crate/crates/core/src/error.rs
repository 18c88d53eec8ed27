use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive value")]
    LnNonPositive,
    #[error("value at sample point is not rational (transcendental atoms present)")]
    NotRational,
    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("2-form is identically degenerate")]
    Degenerate,
    #[error("zero test indeterminate: {0}")]
    Indeterminate(String),
    #[error("no sample point satisfying the domain constraints of chart `{0}`")]
    NoSamplePoint(String),
    #[error("convention check failed: {0}")]
    Convention(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid Lie algebra data: {0}")]
    LieData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
