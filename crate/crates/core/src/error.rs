use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("conjugate defined only for quadratics (degree {0})")]
    NotQuadratic(usize),
    #[error("pole: denominator vanishes at the point")]
    Pole,
    #[error("insufficient depth: index {needed} requested, {available} available")]
    InsufficientDepth { needed: i64, available: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("undecided at precision cap of {bits} bits")]
    PrecisionCap { bits: u64 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no divergence found within {0} quotients")]
    NoDivergence(usize),
    #[error("determinant {0} is not a unit")]
    NotUnimodular(String),
    #[error("partial quotient {0} does not fit in a word letter")]
    LetterOverflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
