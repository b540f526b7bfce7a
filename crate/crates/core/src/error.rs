//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}: all-zero input")]
    ZeroInput(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("form is not reduced")]
    NonReduced,
    #[error("form is reducible: {0}")]
    Reducible(String),
    #[error("curve is singular: {0}")]
    Singular(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve is a component of the other curve")]
    ComponentOverlap,
    #[error("not a flex line: {0}")]
    NotFlexLine(String),
    #[error("point lies on the divisor at infinity")]
    OnDivisor,
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
