//! Crate-wide error type.

use crate::fixed_point::IterationTrace;

/// Errors produced by the series algebra, the solvers, and the CLI front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("non-finite coefficient at index {index}: {value}")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("contraction factor must lie in (0,1), got {0}")]
    ContractionFactor(f64),

    #[error("log-augmented series is only defined for t > 0, got t = {0}")]
    LogDomain(f64),

    #[error("kernel degree {degree} exceeds the configured maximum {max}")]
    KernelDegree { degree: usize, max: usize },

    #[error("domain radius must be positive, got {0}")]
    DomainRadius(f64),

    #[error("grid nodes invalid: {0}")]
    GridNodes(String),

    #[error("evaluation point {point} outside grid hull [{lo}, {hi}]")]
    OutsideHull { point: f64, lo: f64, hi: f64 },

    #[error("empty evaluation domain [{0}, {1}]")]
    EmptyDomain(f64, f64),

    #[error("Theorem requires a(0) != 0")]
    ZeroAtOrigin,

    #[error("exponent epsilon must lie in (0,1), got {0}")]
    EpsilonRange(f64),

    #[error("conditions 1-2 not verified")]
    ConditionsNotVerified,

    #[error("weight parameter L must be positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("fixed-point iteration did not converge within {max_iter} iterations (last difference {last_diff:e})")]
    NoConvergence {
        max_iter: usize,
        last_diff: f64,
        trace: Box<IterationTrace>,
    },

    #[error("unexpected secondary resonance: divisor {divisor:e} at order {order}")]
    SecondaryResonance { order: usize, divisor: f64 },

    #[error("resonant solvability violated: nonzero lower-order contribution {value:e} at order {order}")]
    ResonantSolvability { order: usize, value: f64 },

    #[error("lambda = {lambda} is within tolerance of eigenvalue a(0) alpha^{order}; use the resonant solver")]
    NearResonance { lambda: f64, order: usize },

    #[error("lambda = {lambda} is not an eigenvalue a(0) alpha^m for m <= {max_order}")]
    NotResonant { lambda: f64, max_order: usize },

    #[error("resonant log solver requires constant a")]
    NonConstantCoefficient,

    #[error("{0}")]
    Problem(String),

    #[error("problem file parse error: {0}")]
    ProblemParse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
