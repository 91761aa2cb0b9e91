use crate::interval::IntervalQ;
use crate::rational::Rational;
use thiserror::Error;

/// Errors reported by the library. Variants carry enough payload to act on:
/// resource overruns name the offending count, degeneracy names the interval.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {point} outside domain {domain}")]
    OutsideDomain {
        point: Box<Rational>,
        domain: Box<IntervalQ>,
    },

    #[error("piece budget exceeded: needed {pieces} pieces, cap is {cap}")]
    Resource { pieces: usize, cap: usize },

    #[error("iterate {level} is the identity on {segment}")]
    Degenerate { level: u32, segment: Box<IntervalQ> },

    #[error("covering failed: {0}")]
    Cover(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("inconsistent orbit data: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
