//! The scalar type: arbitrary-precision rationals, always in lowest terms.
//!
//! `BigRational` keeps every value reduced with a positive denominator, and
//! its `Display`/`FromStr` honor the literal grammar used throughout the
//! crate and its file formats: `p/q` for proper fractions, bare `p` for
//! integers, and a rejected parse for zero denominators.

use crate::error::{Error, Result};
use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Build a rational from machine integers. Panics on a zero denominator;
/// intended for literals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse a rational literal (`p/q` or `p`), mapping failures to [`Error::Parse`].
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational literal {text:?}: {e}")))
}
