use thiserror::Error;

use crate::rational::Rational;

/// Failures raised by the analysis and construction operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// The function does not take equal values at both ends of its domain.
    #[error("not a loop: f(a) = {fa} but f(b) = {fb}")]
    NotALoop { fa: Box<Rational>, fb: Box<Rational> },

    /// `d` divides `b - a`, so every loop has a chord of length `d`.
    #[error("d divides b-a: (b - a) / d = {quotient} is a positive integer, so every loop has a chord of length {d}")]
    DivisorDistance { d: Box<Rational>, quotient: Box<Rational> },

    /// Malformed function data (too few breakpoints, unordered x, ...).
    #[error("invalid function: {0}")]
    InvalidFunction(String),

    /// Malformed bump-train or search configuration.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by bad input data rather than by a
    /// mathematically impossible request.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::InvalidFunction(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
