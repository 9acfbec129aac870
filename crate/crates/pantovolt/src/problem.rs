//! Problem data: the operator `A x = int_0^t K(t,s) x(s) ds + a(t) x(alpha t)`
//! together with a forcing, a domain radius, and solver options.
//!
//! The coefficient function `a`, the kernel `K`, and the forcing `f` are
//! restricted to polynomials given by their coefficients. That keeps every
//! continuity hypothesis satisfied by construction and makes the
//! undetermined-coefficients solver exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Default cap on the kernel's degree in each variable.
pub const DEFAULT_MAX_KERNEL_DEGREE: usize = 16;

/// Polynomial kernel `K(t,s) = sum_{p,q} kappa_{pq} t^p s^q`.
///
/// Row index is the power of t, column index the power of s. Rows may be
/// ragged; missing entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateKernel {
    rows: Vec<Vec<f64>>,
}

impl BivariateKernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_max_degree(rows, DEFAULT_MAX_KERNEL_DEGREE)
    }

    pub fn with_max_degree(rows: Vec<Vec<f64>>, max_degree: usize) -> Result<Self> {
        let t_degree = rows.len().saturating_sub(1);
        let s_degree = rows
            .iter()
            .map(|r| r.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1);
        if t_degree > max_degree || s_degree > max_degree {
            return Err(Error::KernelDegree {
                degree: t_degree.max(s_degree),
                max: max_degree,
            });
        }
        for (p, row) in rows.iter().enumerate() {
            for (q, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFiniteCoefficient {
                        index: p + q,
                        value,
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    /// The zero kernel.
    pub fn zero() -> Self {
        Self { rows: Vec::new() }
    }

    /// The constant kernel `K(t,s) = c`.
    pub fn constant(c: f64) -> Self {
        Self {
            rows: vec![vec![c]],
        }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn coeff(&self, p: usize, q: usize) -> f64 {
        self.rows
            .get(p)
            .and_then(|r| r.get(q))
            .copied()
            .unwrap_or(0.0)
    }

    /// Degree in t.
    pub fn t_degree(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// Degree in s.
    pub fn s_degree(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&c| c == 0.0))
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let mut sum = 0.0;
        let mut tp = 1.0;
        for row in &self.rows {
            let mut ks = 0.0;
            for &c in row.iter().rev() {
                ks = ks * s + c;
            }
            sum += tp * ks;
            tp *= t;
        }
        sum
    }

    /// Grid maximum of |K| over the integration triangle
    /// `{(t,s): |t| <= radius, s between 0 and t}`.
    pub fn sup_on_triangle(&self, radius: f64) -> f64 {
        let steps = 128;
        let mut sup = 0.0f64;
        for i in 0..=steps {
            let t = -radius + 2.0 * radius * i as f64 / steps as f64;
            for j in 0..=steps {
                let s = t * j as f64 / steps as f64;
                sup = sup.max(self.eval(t, s).abs());
            }
        }
        sup
    }
}

fn default_order() -> usize {
    30
}
fn default_grid() -> usize {
    512
}
fn default_grading() -> f64 {
    2.0
}
fn default_quad_points() -> usize {
    8
}
fn default_quad_panels() -> usize {
    64
}
fn default_quad_tol() -> f64 {
    1e-10
}
fn default_tol() -> f64 {
    1e-12
}
fn default_max_iterations() -> usize {
    200
}
fn default_epsilon() -> f64 {
    0.5
}
fn default_resonance_rtol() -> f64 {
    1e-9
}
fn default_eval_grid() -> usize {
    512
}
fn default_min_t() -> f64 {
    0.01
}

/// Numerical knobs shared by the solvers. All fields have conservative
/// defaults; problem files may override any subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    /// Series truncation order N.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Number of grid nodes on [0, T] for the fixed-point solver.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Grading exponent of the solver grid, `t_j = T (j/M)^grading`.
    #[serde(default = "default_grading")]
    pub grading: f64,
    /// Gauss-Legendre points per quadrature panel.
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
    /// Base panel count for quadrature over [0, t] at a single point.
    #[serde(default = "default_quad_panels")]
    pub quad_panels: usize,
    /// Quadrature accuracy assumed by consistency checks.
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    /// Fixed-point stopping tolerance in the weighted norm.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Fixed-point iteration cap.
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Default Hoelder exponent epsilon in (0,1).
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Relative tolerance deciding whether lambda hits an eigenvalue.
    #[serde(default = "default_resonance_rtol")]
    pub resonance_rtol: f64,
    /// Sample count of residual evaluation grids.
    #[serde(default = "default_eval_grid")]
    pub eval_grid: usize,
    /// Lower cutoff for sampling log-singular solutions.
    #[serde(default = "default_min_t")]
    pub min_t: f64,
    /// Extend solver grids to [-T, T] instead of [0, T].
    #[serde(default)]
    pub negative_domain: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults are total")
    }
}

/// The full problem data of one operator equation
/// `lambda x(t) = int_0^t K(t,s) x(s) ds + a(t) x(alpha t) + f(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    /// Argument contraction factor, `0 < alpha < 1`.
    pub alpha: f64,
    /// Polynomial coefficient function a(t).
    pub a: PowerSeries,
    /// Polynomial kernel K(t,s).
    pub kernel: BivariateKernel,
    /// Polynomial forcing f(t); zero for the homogeneous equation.
    pub f: PowerSeries,
    /// Spectral parameter, when the task at hand fixes one.
    pub lambda: Option<f64>,
    /// Domain radius T: the equation is considered for |t| <= T.
    pub radius: f64,
    pub options: SolverOptions,
}

impl ProblemSpec {
    pub fn new(
        alpha: f64,
        a: PowerSeries,
        kernel: BivariateKernel,
        f: PowerSeries,
        radius: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::ContractionFactor(alpha));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::DomainRadius(radius));
        }
        Ok(Self {
            alpha,
            a,
            kernel,
            f,
            lambda: None,
            radius,
            options: SolverOptions::default(),
        })
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// `a(0)`, required nonzero by every spectral operation.
    pub fn a_at_origin(&self) -> Result<f64> {
        let a0 = self.a.coeff(0);
        if a0 == 0.0 {
            return Err(Error::ZeroAtOrigin);
        }
        Ok(a0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_eval_and_degrees() {
        // K(t,s) = 1 + 2 t s + 3 t^2
        let k = BivariateKernel::new(vec![vec![1.0], vec![0.0, 2.0], vec![3.0]]).unwrap();
        assert_eq!(k.t_degree(), 2);
        assert_eq!(k.s_degree(), 1);
        assert_eq!(k.eval(2.0, 0.5), 1.0 + 2.0 + 12.0);
        assert!(!k.is_zero());
        assert!(BivariateKernel::zero().is_zero());
    }

    #[test]
    fn kernel_degree_cap() {
        let rows = vec![vec![0.0; 20]];
        assert!(matches!(
            BivariateKernel::new(rows),
            Err(Error::KernelDegree { .. })
        ));
    }

    #[test]
    fn kernel_sup_constant() {
        let k = BivariateKernel::constant(1.0);
        assert_eq!(k.sup_on_triangle(1.0), 1.0);
    }

    #[test]
    fn spec_validation() {
        let a = PowerSeries::constant(1.0, 0);
        let f = PowerSeries::zeros(0);
        assert!(ProblemSpec::new(0.5, a.clone(), BivariateKernel::zero(), f.clone(), 1.0).is_ok());
        assert!(matches!(
            ProblemSpec::new(1.5, a.clone(), BivariateKernel::zero(), f.clone(), 1.0),
            Err(Error::ContractionFactor(_))
        ));
        assert!(matches!(
            ProblemSpec::new(0.5, a, BivariateKernel::zero(), f, 0.0),
            Err(Error::DomainRadius(_))
        ));
    }

    #[test]
    fn a_at_origin_checked_at_use_site() {
        let a = PowerSeries::new(vec![0.0, 1.0]).unwrap();
        let spec =
            ProblemSpec::new(0.5, a, BivariateKernel::zero(), PowerSeries::zeros(0), 1.0).unwrap();
        assert!(matches!(spec.a_at_origin(), Err(Error::ZeroAtOrigin)));
    }

    #[test]
    fn options_defaults() {
        let o = SolverOptions::default();
        assert_eq!(o.order, 30);
        assert_eq!(o.grid, 512);
        assert_eq!(o.quad_points, 8);
        assert_eq!(o.tol, 1e-12);
        assert_eq!(o.epsilon, 0.5);
        assert!(!o.negative_domain);
    }
}
