use thiserror::Error;

/// Errors raised by the verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivByZeroInterval,
    #[error("exponential overflows the floating-point range")]
    ExpOverflow,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("step size underflow at t = {t} (h = {h})")]
    StiffnessError { t: f64, h: f64 },
    #[error("dissipativity hypothesis |c0| - 2 sum |c_m| > 0 not verified (margin lower bound {margin_lo})")]
    DissipativityUnverified { margin_lo: f64 },
    #[error("coefficient sequence is not Hermitian at index {index}; c(x) must be real-valued")]
    CoefficientNotReal { index: i64 },
    #[error("a time period T is required for the periodic estimate")]
    PeriodRequired,
    #[error("kappa = sum|c_m|/|c0| is not verified below 1")]
    LemmaHypothesisFails,
    #[error("approximate solution was built with a different coefficient sequence")]
    CoefficientMismatch,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
