//! Crate-wide error type.

use alloc::string::String;

/// Everything that can go wrong in the solver stack.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at t = {0}")]
    GammaPole(f64),
    #[error("hypergeometric parameter c = {0} is a nonpositive integer")]
    HypergeomParameter(f64),
    #[error("hypergeometric series diverges at z = 1 (c - a - b = {0} <= 0)")]
    HypergeomDivergent(f64),
    #[error("hypergeometric argument z = {0} is outside (-inf, 1]")]
    HypergeomArgument(f64),
    #[error("series failed to converge after {0} terms")]
    NoConvergence(usize),
    #[error("singular coefficient must satisfy 0 < 2*alpha < 1, got 2*alpha = {0}")]
    InvalidAlpha(f64),
    #[error("field and source points coincide (r = {0:e})")]
    Singularity(f64),
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("degenerate surface: area element {area:e} at parameter (s, t) = ({s}, {t})")]
    DegenerateSurface { s: f64, t: f64, area: f64 },
    #[error("grid nodes {0} and {1} coincide")]
    CoincidentNodes(usize, usize),
    #[error("linear system is numerically singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },
    #[error(
        "lambda = -2 is an eigenvalue of the Q1 double-layer operator; the density equation is not uniquely solvable"
    )]
    EigenvalueCase,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("point ({0}, {1}, {2}) is not inside the domain")]
    OutOfDomain(f64, f64, f64),
    #[error("incompatible boundary data: surface and plane values differ by {0:e} on the rim")]
    Incompatible(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
