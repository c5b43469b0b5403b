use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("exponent {exponent} is not divisible by p = {p}")]
    ExponentNotDivisible { exponent: i64, p: u32 },
    #[error("invalid conductor {m} for p = {p}")]
    InvalidConductor { m: i64, p: u32 },
    #[error("argument {0} lies outside the domain [-1, oo)")]
    OutsideDomain(String),
    #[error("binomial index {i} out of range for p = {p}")]
    IndexOutOfRange { i: usize, p: u32 },
    #[error("invalid order n = {n} for p = {p}")]
    InvalidOrder { n: usize, p: u32 },
    #[error("invalid jump index j = {j} for n = {n}")]
    InvalidIndex { j: usize, n: usize },
    #[error("extension is not totally ramified: {0}")]
    NotTotallyRamified(String),
    #[error("degenerate Galois group: {0}")]
    DegenerateGroup(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("defining pair is not normalized: {0}")]
    NotNormalized(String),
    #[error("jump sequence is not strictly increasing: {0}")]
    MonotonicityViolation(String),
    #[error("class is not ramified: {0}")]
    NotRamified(String),
    #[error("defining element is not reduced: {0}")]
    NotReduced(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::ExponentNotDivisible { .. } => "ExponentNotDivisible",
            Error::InvalidConductor { .. } => "InvalidConductor",
            Error::OutsideDomain(_) => "OutsideDomain",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidOrder { .. } => "InvalidOrder",
            Error::InvalidIndex { .. } => "InvalidIndex",
            Error::NotTotallyRamified(_) => "NotTotallyRamified",
            Error::DegenerateGroup(_) => "DegenerateGroup",
            Error::NotApplicable(_) => "NotApplicable",
            Error::NotNormalized(_) => "NotNormalized",
            Error::MonotonicityViolation(_) => "MonotonicityViolation",
            Error::NotRamified(_) => "NotRamified",
            Error::NotReduced(_) => "NotReduced",
            Error::Parse(_) => "ParseError",
        }
    }
}
