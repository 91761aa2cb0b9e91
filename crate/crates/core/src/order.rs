//! The Sharkovsky ordering on positive integers and related period arithmetic.
//!
//! The ordering runs
//!
//! ```text
//! 3, 5, 7, ..., 2*3, 2*5, ..., 4*3, 4*5, ..., 8, 4, 2, 1
//! ```
//!
//! with the odd numbers greater than one first, then their doublings level by
//! level, and the powers of two last in decreasing order. We write `a ≺ b`
//! when `a` comes earlier; earlier periods force all later ones.

use crate::error::{Error, Result};
use num_integer::Integer;
use std::cmp::Ordering;

/// `n = 2^exp * odd` with `odd` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharkovskyKey {
    pub exp: u32,
    pub odd: u64,
}

/// Splits a positive integer into its dyadic part and odd part.
pub fn decompose(n: u64) -> Result<SharkovskyKey> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let exp = n.trailing_zeros();
    Ok(SharkovskyKey { exp, odd: n >> exp })
}

/// Compares in Sharkovsky order: `Ordering::Less` means the left argument
/// comes earlier (forces the right one).
pub fn compare(a: u64, b: u64) -> Result<Ordering> {
    let ka = decompose(a)?;
    let kb = decompose(b)?;
    if ka == kb {
        return Ok(Ordering::Equal);
    }
    let ord = match (ka.odd == 1, kb.odd == 1) {
        // Two powers of two: larger exponent first.
        (true, true) => kb.exp.cmp(&ka.exp),
        // Powers of two come after everything else.
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        // Otherwise order by dyadic level, then by odd part.
        (false, false) => ka.exp.cmp(&kb.exp).then(ka.odd.cmp(&kb.odd)),
    };
    Ok(ord)
}

/// All periods that `n` forces: the set `{ k : n ≺ k or k == n }`, capped at
/// `bound`, in increasing numeric order.
pub fn tail(n: u64, bound: u64) -> Result<Vec<u64>> {
    decompose(n)?;
    let mut out = Vec::new();
    for k in 1..=bound {
        if compare(n, k)? != Ordering::Greater {
            out.push(k);
        }
    }
    Ok(out)
}

/// Least period of `x` under `f^n` when `x` has least period `m` under `f`.
pub fn least_period_under_power(m: u64, n: u64) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("periods must be positive".into()));
    }
    Ok(m / m.gcd(&n))
}

/// Least periods under `f` that can produce least period `k` under `f^n`:
/// `{ k*n/s : s | n, gcd(s, k) = 1 }`, sorted increasing.
pub fn lift_periods(k: u64, n: u64) -> Result<Vec<u64>> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidInput("periods must be positive".into()));
    }
    let mut out: Vec<u64> = (1..=n)
        .filter(|s| n.is_multiple_of(*s) && s.gcd(&k) == 1)
        .map(|s| k * n / s)
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
