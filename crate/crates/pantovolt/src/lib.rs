//! pantovolt: spectral computation and solvers for integral-functional
//! Volterra operators with a proportionally contracted argument,
//!
//! ```text
//! A x := int_0^t K(t,s) x(s) ds + a(t) x(alpha t),  0 < alpha < 1.
//! ```
//!
//! The functional term `a(t) x(alpha t)` (a pantograph-type argument) gives
//! this operator a genuine point spectrum, unlike the classical Volterra
//! operator: with `a(0) != 0` the values `lambda_n = a(0) alpha^n` are
//! eigenvalues, with eigenfunctions asymptotic to `t^n`. This crate computes
//! that family and everything around it:
//!
//! - [`spectrum`]: eigenvalue enumeration, numerical verification of the
//!   spectral hypotheses, and weighted-norm contraction estimates;
//! - [`series_solver`]: exact truncated-series eigenfunctions and particular
//!   solutions by undetermined coefficients, including the logarithmically
//!   singular solutions `P(t) + ln t Q(t)` that appear when the forcing hits
//!   a resonant eigenvalue;
//! - [`fixed_point`]: the independent construction by successive
//!   approximations in the exponentially weighted norm;
//! - [`operator`]: exact and quadrature-based operator application plus the
//!   residual oracle every solution is verified against;
//! - [`series`] / [`grid`]: the underlying truncated-series algebra and
//!   sampled-function representations;
//! - [`cli`]: JSON problem files, JSON reports, and CSV sampling for the
//!   `pantovolt` binary.
//!
//! Quick start:
//!
//! ```rust
//! use pantovolt::{BivariateKernel, PowerSeries, ProblemSpec};
//!
//! // lambda x(t) = int_0^t x(s) ds + x(t/2) + 2  on [0, 1]
//! let spec = ProblemSpec::new(
//!     0.5,
//!     PowerSeries::constant(1.0, 0),
//!     BivariateKernel::constant(1.0),
//!     PowerSeries::constant(2.0, 0),
//!     1.0,
//! )
//! .unwrap();
//!
//! // lambda_0 = a(0) alpha^0 = 1 is an eigenvalue ...
//! let lambda = pantovolt::spectrum::eigenvalue(&spec, 0).unwrap();
//! assert_eq!(lambda, 1.0);
//!
//! // ... so the general solution carries a free constant and a log term.
//! let sol = pantovolt::series_solver::general_solution(&spec, lambda, 0.0, 30).unwrap();
//! assert_eq!(sol.resonant_order, Some(0));
//! let b0 = sol.particular.q().coeff(0);
//! assert!((b0 - 2.0 / 2.0f64.ln()).abs() < 1e-12);
//!
//! // Verify by substitution into the equation.
//! let full = sol.full();
//! let report = pantovolt::operator::residual(
//!     &spec,
//!     lambda,
//!     &pantovolt::operator::SolutionRep::LogSeries(&full),
//!     (0.01, 1.0),
//! )
//! .unwrap();
//! assert!(report.sup_norm < 1e-8);
//! ```
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod cli;
pub mod error;
pub mod fixed_point;
pub mod grid;
pub mod operator;
pub mod problem;
pub mod quadrature;
pub mod series;
pub mod series_solver;
pub mod spectrum;

pub use error::{Error, Result};
pub use grid::{GridFunction, InterpRule};
pub use problem::{BivariateKernel, ProblemSpec, SolverOptions};
pub use series::{LogPowerSeries, PowerSeries};
