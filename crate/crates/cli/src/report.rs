//! Closure verification of period spectra: every period present must drag
//! its whole Sharkovsky tail along, and a violation pair is a concrete
//! counterexample record.

use std::cmp::Ordering;
use std::fmt;

use sharkovsky_core::{compare, Result, SpectrumReport};

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub subject: String,
    pub bound: u64,
    pub present_periods: Vec<u64>,
    /// Pairs (m, n): m is present, m comes before n in the ordering,
    /// n is at most the bound, yet n is absent.
    pub violations: Vec<(u64, u64)>,
}

impl VerificationReport {
    pub fn from_spectrum(subject: impl Into<String>, census: &SpectrumReport) -> Result<Self> {
        let present_periods = census.present_periods();
        let mut violations = Vec::new();
        for &m in &present_periods {
            for n in 1..=census.bound {
                if compare(m, n)? == Ordering::Less && !census.present(n) {
                    violations.push((m, n));
                }
            }
        }
        Ok(VerificationReport {
            subject: subject.into(),
            bound: census.bound,
            present_periods,
            violations,
        })
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subject: {}", self.subject)?;
        writeln!(f, "bound: {}", self.bound)?;
        if self.present_periods.is_empty() {
            writeln!(f, "present: none")?;
        } else {
            write!(f, "present:")?;
            for n in &self.present_periods {
                write!(f, " {n}")?;
            }
            writeln!(f)?;
        }
        if self.violations.is_empty() {
            writeln!(f, "violations: none")?;
        } else {
            write!(f, "violations:")?;
            for (m, n) in &self.violations {
                write!(f, " ({m}, {n})")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "status: {}", if self.passed() { "pass" } else { "fail" })
    }
}
