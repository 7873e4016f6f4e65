//! One line of a verification report.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tol: f64,
}

impl Check {
    /// Passes when `|measured - expected| <= tol`.
    pub fn new(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Check { name: name.into(), measured, expected, tol }
    }

    /// An error-like quantity that must not exceed `tol`.
    pub fn at_most(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Check::new(name, measured, 0.0, tol)
    }

    pub fn passed(&self) -> bool {
        (self.measured - self.expected).abs() <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<56} measured={:>+.6e} expected={:>+.6e} tol={:.1e} {}",
            self.name,
            self.measured,
            self.expected,
            self.tol,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
