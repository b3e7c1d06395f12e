use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two values are numerically closer than the tolerance but not provably equal.
    #[error("precision: {lhs} and {rhs} differ by at most {tol:e} without being exactly equal")]
    Precision { lhs: String, rhs: String, tol: f64 },
    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget { what: &'static str, needed: u128, limit: u128 },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("set quantifier `{0}` is not allowed in first-order formulas")]
    Dialect(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("set quantification over {size} elements exceeds the cap of {cap}")]
    SetQuantifierBudget { size: usize, cap: usize },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("malformed expression: {0}")]
    MalformedExpression(String),
    #[error("length `{0}` is not rational")]
    IrrationalLength(String),
    #[error("input too small: {0}")]
    TooSmall(String),
    #[error("interval of `{0}` leaves the span bound")]
    SpanViolation(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}
