use thiserror::Error;

/// Errors raised by the library. Messages are single-line so the CLI can
/// surface them verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension k = {k}: {reason}")]
    InvalidDimension { k: i64, reason: &'static str },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("work cap exceeded: {what} needs {needed:.3e}, cap is {cap:.3e}")]
    WorkCap { what: &'static str, needed: f64, cap: f64 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("not a Schwartz function: {0}")]
    NotSchwartz(String),

    #[error("Gaussian scale must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("test function must be {expected}")]
    Parity { expected: &'static str },

    #[error("Hadamard division needs a zero constant term, found {0}")]
    NonzeroConstantTerm(String),

    #[error("exact mode unavailable: {0}")]
    Inexact(String),

    #[error("argument must be nonzero: {0}")]
    ZeroArgument(&'static str),

    #[error("integral lattice shift: {0} lies in Z^k")]
    IntegralShift(&'static str),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) within {panels} panels")]
    Quadrature { tol: f64, estimate: f64, panels: usize },

    #[error("specialized form disagrees with general path: relative difference {0:e}")]
    SpecializedMismatch(f64),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_odd_k(k: u32) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidDimension { k: k as i64, reason: "must be at least 3" });
    }
    if k.is_multiple_of(2) {
        return Err(Error::InvalidDimension { k: k as i64, reason: "must be odd" });
    }
    Ok(())
}
