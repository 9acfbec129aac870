//! The integral-functional operator and the residual oracle.
//!
//! `apply_to_series` applies the operator exactly in the series algebra;
//! `apply_to_grid` applies it numerically to sampled functions. `residual`
//! substitutes a candidate solution into the equation with an independent
//! quadrature-based application of the operator and reports the mismatch:
//! it is the project-wide correctness oracle, deliberately ignorant of how
//! the candidate was produced.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::problem::ProblemSpec;
use crate::quadrature::{origin_refined_breaks, GaussLegendre};
use crate::series::{LogPowerSeries, PowerSeries};

/// Result of the exact series application: the truncated image together with
/// the largest coefficient magnitude that fell above the truncation order.
/// A large overflow value signals that the truncation is hiding real mass.
#[derive(Debug, Clone)]
pub struct SeriesApplication {
    pub series: LogPowerSeries,
    pub truncation_overflow: f64,
}

/// Applies `A x = int_0^t K(t,s) x(s) ds + a(t) x(alpha t)` exactly in the
/// series algebra, truncating the result at the configured order.
///
/// The kernel term is assembled monomial by monomial: multiplication by
/// `s^q`, antiderivative from zero, multiplication by `t^p`. All arithmetic
/// runs at an extended order so that only the final truncation discards
/// coefficients, and their maximum magnitude is reported.
pub fn apply_to_series(spec: &ProblemSpec, x: &LogPowerSeries) -> SeriesApplication {
    let target = spec.options.order;
    let kernel = &spec.kernel;
    let reach = (kernel.t_degree() + kernel.s_degree() + 1).max(spec.a.order());
    let ext = x.order() + reach + 1;

    let mut acc = LogPowerSeries::zeros(ext);
    for (p, row) in kernel.rows().iter().enumerate() {
        for (q, &kappa) in row.iter().enumerate() {
            if kappa == 0.0 {
                continue;
            }
            let term = x
                .shifted_up(q)
                .integrate_from_zero()
                .shifted_up(p)
                .with_order(ext);
            acc = LogPowerSeries::combine(1.0, &acc, kappa, &term).expect("orders aligned");
        }
    }

    let functional = x
        .dilate(spec.alpha)
        .expect("alpha validated at construction")
        .with_order(ext)
        .multiply_series(&spec.a)
        .with_order(ext);
    acc = LogPowerSeries::combine(1.0, &acc, 1.0, &functional).expect("orders aligned");

    let truncation_overflow = acc.overflow_above(target);
    SeriesApplication {
        series: acc.with_order(target),
        truncation_overflow,
    }
}

/// Applies the operator to a sampled function: composite Gauss-Legendre
/// quadrature of `K(t,s) x(s)` over [0, t] with panels aligned to the node
/// spacing, plus `a(t) x(alpha t)` with the contracted argument interpolated.
/// Orientation is handled for negative t (`int_0^t = -int_t^0`).
pub fn apply_to_grid(spec: &ProblemSpec, x: &GridFunction) -> Result<GridFunction> {
    let (lo, hi) = x.hull();
    if lo > 0.0 || hi < 0.0 {
        return Err(Error::GridNodes(
            "grid must bracket 0 so int_0^t stays interpolable".into(),
        ));
    }
    for &t in x.nodes() {
        let contracted = spec.alpha * t;
        if !x.contains(contracted) {
            return Err(Error::OutsideHull {
                point: contracted,
                lo,
                hi,
            });
        }
    }

    let nodes = x.nodes();
    let mut values = vec![0.0; nodes.len()];

    if !spec.kernel.is_zero() {
        let rule = GaussLegendre::new(spec.options.quad_points);
        let rows = spec.kernel.rows();
        // K(t,s) = sum_p t^p k_p(s) lets the per-node integrals share one
        // cumulative sweep per power of t instead of O(M^2) quadrature.
        let row_eval = |p: usize, s: f64| {
            let mut ks = 0.0;
            for &c in rows[p].iter().rev() {
                ks = ks * s + c;
            }
            ks * x.eval(s)
        };

        // Ascending sweep through the positive nodes.
        let mut cums = vec![0.0; rows.len()];
        let mut prev = 0.0;
        for (j, &t) in nodes.iter().enumerate() {
            if t <= 0.0 {
                continue;
            }
            for (p, cum) in cums.iter_mut().enumerate() {
                *cum += rule.integrate(prev, t, |s| row_eval(p, s));
            }
            values[j] = horner_powers(t, &cums);
            prev = t;
        }
        // Descending sweep through the negative nodes.
        let mut cums = vec![0.0; rows.len()];
        let mut prev = 0.0;
        for (j, &t) in nodes.iter().enumerate().rev() {
            if t >= 0.0 {
                continue;
            }
            for (p, cum) in cums.iter_mut().enumerate() {
                *cum -= rule.integrate(t, prev, |s| row_eval(p, s));
            }
            values[j] = horner_powers(t, &cums);
            prev = t;
        }
    }

    for (j, &t) in nodes.iter().enumerate() {
        values[j] += spec.a.eval(t) * x.eval(spec.alpha * t);
    }

    x.with_values(values)
}

/// Sum over powers: `sum_p t^p c_p`.
fn horner_powers(t: f64, cums: &[f64]) -> f64 {
    cums.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// A candidate solution in any of the representations the solvers produce.
#[derive(Debug, Clone, Copy)]
pub enum SolutionRep<'a> {
    Series(&'a PowerSeries),
    LogSeries(&'a LogPowerSeries),
    Grid(&'a GridFunction),
}

impl SolutionRep<'_> {
    fn eval(&self, t: f64) -> f64 {
        match self {
            SolutionRep::Series(x) => x.eval(t),
            SolutionRep::LogSeries(x) => {
                if x.is_log_free() {
                    x.p().eval(t)
                } else {
                    x.eval(t).expect("domain checked before sampling")
                }
            }
            SolutionRep::Grid(x) => x.eval(t),
        }
    }
}

/// Residual of a candidate solution over a domain.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// max_i |r(t_i)| over the evaluation grid.
    pub sup_norm: f64,
    /// Trapezoidal L2 norm of the sampled residual.
    pub l2_norm: f64,
    /// The sampled residual (t_i, r(t_i)).
    pub samples: Vec<(f64, f64)>,
    /// Domain the residual was evaluated on.
    pub domain: (f64, f64),
}

/// Samples `r(t) = lambda x(t) - (A x)(t) - f(t)` on a dense grid over the
/// domain. The operator is applied by quadrature (with geometric refinement
/// toward s = 0, where log-singular candidates live), independent of how the
/// candidate was produced.
pub fn residual(
    spec: &ProblemSpec,
    lambda: f64,
    x: &SolutionRep,
    domain: (f64, f64),
) -> Result<ResidualReport> {
    let (d0, d1) = domain;
    if d0.is_nan() || d1.is_nan() || d1 <= d0 {
        return Err(Error::EmptyDomain(d0, d1));
    }
    if let SolutionRep::LogSeries(series) = x {
        if !series.is_log_free() && d0 <= 0.0 {
            return Err(Error::LogDomain(d0));
        }
    }
    if let SolutionRep::Grid(g) = x {
        let (lo, hi) = g.hull();
        for &t in &[d0, d1, 0.0] {
            if !g.contains(t) {
                return Err(Error::OutsideHull { point: t, lo, hi });
            }
        }
    }

    let count = spec.options.eval_grid.max(2);
    let ts: Vec<f64> = (0..count)
        .map(|i| d0 + (d1 - d0) * i as f64 / (count - 1) as f64)
        .collect();

    // Quadrature part, one cumulative sweep per kernel row and direction.
    let mut kernel_term = vec![0.0; ts.len()];
    if !spec.kernel.is_zero() {
        let rule = GaussLegendre::new(spec.options.quad_points);
        let rows = spec.kernel.rows();
        let grid_nodes = match x {
            SolutionRep::Grid(g) => Some(g.nodes()),
            _ => None,
        };
        let row_eval = |p: usize, s: f64| {
            let mut ks = 0.0;
            for &c in rows[p].iter().rev() {
                ks = ks * s + c;
            }
            ks * x.eval(s)
        };
        let h_target = d1.abs().max(d0.abs()).max(1e-12) / spec.options.quad_panels as f64;

        let mut sweep = |indices: &mut dyn Iterator<Item = usize>, negative: bool| {
            let mut cums = vec![0.0; rows.len()];
            let mut prev = 0.0f64;
            for i in indices {
                let t = ts[i];
                if (negative && t >= 0.0) || (!negative && t <= 0.0) {
                    if t == 0.0 {
                        kernel_term[i] = 0.0;
                    }
                    continue;
                }
                let (a, b) = if negative { (t, prev) } else { (prev, t) };
                let breaks = segment_breaks(a, b, prev == 0.0, grid_nodes, h_target);
                for (p, cum) in cums.iter_mut().enumerate() {
                    let piece = rule.integrate_segments(&breaks, |s| row_eval(p, s));
                    *cum += if negative { -piece } else { piece };
                }
                kernel_term[i] = horner_powers(t, &cums);
                prev = t;
            }
        };
        sweep(&mut (0..ts.len()), false);
        sweep(&mut (0..ts.len()).rev(), true);
    }

    let mut samples = Vec::with_capacity(ts.len());
    let mut sup = 0.0f64;
    for (i, &t) in ts.iter().enumerate() {
        let r = lambda * x.eval(t)
            - kernel_term[i]
            - spec.a.eval(t) * x.eval(spec.alpha * t)
            - spec.f.eval(t);
        sup = sup.max(r.abs());
        samples.push((t, r));
    }

    let mut l2_sq = 0.0;
    for pair in samples.windows(2) {
        let (t0, r0) = pair[0];
        let (t1, r1) = pair[1];
        l2_sq += 0.5 * (r0 * r0 + r1 * r1) * (t1 - t0);
    }

    Ok(ResidualReport {
        sup_norm: sup,
        l2_norm: l2_sq.sqrt(),
        samples,
        domain,
    })
}

/// Panel boundaries for one cumulative segment [a, b] (0 <= a < b or
/// a < b <= 0). Segments starting at the origin are refined geometrically;
/// grid-backed candidates get panels aligned to their nodes so the integrand
/// stays polynomial per panel; otherwise panels are capped at `h_target`.
fn segment_breaks(
    a: f64,
    b: f64,
    from_origin: bool,
    grid_nodes: Option<&[f64]>,
    h_target: f64,
) -> Vec<f64> {
    let width = b - a;
    let mut breaks: Vec<f64> = Vec::new();
    if from_origin && grid_nodes.is_none() {
        let panels = ((width / h_target).ceil() as usize).clamp(4, 4096);
        if a == 0.0 {
            return origin_refined_breaks(b, panels);
        }
        // Negative-side segment ending at 0: mirror the refinement.
        let mirrored = origin_refined_breaks(-a, panels);
        breaks = mirrored.iter().rev().map(|&s| -s).collect();
        return breaks;
    }
    breaks.push(a);
    if let Some(nodes) = grid_nodes {
        for &s in nodes {
            if s > a && s < b {
                breaks.push(s);
            }
        }
    } else {
        let panels = ((width / h_target).ceil() as usize).clamp(1, 4096);
        for k in 1..panels {
            breaks.push(a + width * k as f64 / panels as f64);
        }
    }
    breaks.push(b);
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{uniform_nodes, InterpRule};
    use crate::problem::BivariateKernel;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// lambda phi(t) = int_0^t phi(s) ds + phi(t/2) [+ 2]: the sample problem
    /// used throughout the tests (K = 1, a = 1, alpha = 1/2).
    fn sample_spec(forcing: f64) -> ProblemSpec {
        ProblemSpec::new(
            0.5,
            PowerSeries::constant(1.0, 0),
            BivariateKernel::constant(1.0),
            PowerSeries::constant(forcing, 0),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn series_application_is_linear_at_zero() {
        let spec = sample_spec(0.0);
        let out = apply_to_series(&spec, &LogPowerSeries::zeros(30));
        assert!(out.series.p().is_zero());
        assert!(out.series.q().is_zero());
        assert_eq!(out.truncation_overflow, 0.0);
    }

    #[test]
    fn series_application_constant_input() {
        let spec = sample_spec(0.0);
        let one = LogPowerSeries::from_series(PowerSeries::constant(1.0, 30));
        let out = apply_to_series(&spec, &one);
        // int_0^t 1 ds + 1 = t + 1
        assert_eq!(out.series.p().coeff(0), 1.0);
        assert_eq!(out.series.p().coeff(1), 1.0);
        for i in 2..=30 {
            assert_eq!(out.series.p().coeff(i), 0.0);
        }
        assert!(out.series.q().is_zero());
    }

    #[test]
    fn series_application_monomials() {
        let spec = sample_spec(0.0);
        for n in 0..6usize {
            let x = LogPowerSeries::from_series(PowerSeries::monomial(n, 30));
            let out = apply_to_series(&spec, &x);
            // t^{n+1}/(n+1) + 2^{-n} t^n
            for i in 0..=30 {
                let expected = if i == n + 1 {
                    1.0 / (n as f64 + 1.0)
                } else {
                    0.0
                } + if i == n { 0.5f64.powi(n as i32) } else { 0.0 };
                assert_relative_eq!(out.series.p().coeff(i), expected, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn series_application_reports_truncation_overflow() {
        let mut spec = sample_spec(0.0);
        spec.options.order = 3;
        let x = LogPowerSeries::from_series(PowerSeries::monomial(3, 3).scale(5.0));
        let out = apply_to_series(&spec, &x);
        // The kernel term 5 t^4/4 falls above order 3 and must be flagged.
        assert_eq!(out.series.p().order(), 3);
        assert_relative_eq!(out.truncation_overflow, 1.25, max_relative = 1e-15);
    }

    #[test]
    fn grid_application_of_zero_is_zero() {
        let spec = sample_spec(0.0);
        let x =
            GridFunction::sample(uniform_nodes(0.0, 1.0, 129), InterpRule::Cubic, |_| 0.0).unwrap();
        let out = apply_to_grid(&spec, &x).unwrap();
        for &v in out.values() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn grid_application_of_constant() {
        let spec = sample_spec(0.0);
        let x =
            GridFunction::sample(uniform_nodes(0.0, 1.0, 513), InterpRule::Cubic, |_| 1.0).unwrap();
        let out = apply_to_grid(&spec, &x).unwrap();
        for (&t, &v) in out.nodes().iter().zip(out.values()) {
            assert_abs_diff_eq!(v, t + 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn grid_application_negative_side() {
        let spec = sample_spec(0.0);
        let x = GridFunction::sample(uniform_nodes(-1.0, 1.0, 513), InterpRule::Cubic, |_| 1.0)
            .unwrap();
        let out = apply_to_grid(&spec, &x).unwrap();
        for (&t, &v) in out.nodes().iter().zip(out.values()) {
            assert_abs_diff_eq!(v, t + 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn grid_application_rejects_detached_grid() {
        let spec = sample_spec(0.0);
        let x =
            GridFunction::sample(uniform_nodes(0.5, 1.0, 33), InterpRule::Cubic, |_| 1.0).unwrap();
        assert!(apply_to_grid(&spec, &x).is_err());
    }

    #[test]
    fn residual_of_zero_solution_is_zero() {
        let spec = sample_spec(0.0);
        let zero = PowerSeries::zeros(30);
        let rep = residual(&spec, 1.0, &SolutionRep::Series(&zero), (0.0, 1.0)).unwrap();
        assert_eq!(rep.sup_norm, 0.0);
        assert_eq!(rep.l2_norm, 0.0);
    }

    #[test]
    fn residual_rejects_empty_domain() {
        let spec = sample_spec(0.0);
        let zero = PowerSeries::zeros(4);
        assert!(matches!(
            residual(&spec, 1.0, &SolutionRep::Series(&zero), (1.0, 1.0)),
            Err(Error::EmptyDomain(_, _))
        ));
    }

    #[test]
    fn residual_rejects_log_solution_at_origin() {
        let spec = sample_spec(2.0);
        let x = LogPowerSeries::new(PowerSeries::zeros(3), PowerSeries::constant(1.0, 3)).unwrap();
        assert!(matches!(
            residual(&spec, 1.0, &SolutionRep::LogSeries(&x), (0.0, 1.0)),
            Err(Error::LogDomain(_))
        ));
    }

    #[test]
    fn residual_is_linear_in_solution_and_forcing() {
        // r(a x + b y; a f1 + b f2) = a r(x; f1) + b r(y; f2) pointwise.
        let spec1 = sample_spec(2.0);
        let spec2 = sample_spec(-1.0);
        let x = PowerSeries::new(vec![1.0, 0.5, -0.25, 0.125])
            .unwrap()
            .with_order(8);
        let y = PowerSeries::new(vec![0.0, 1.0, 1.0, -2.0])
            .unwrap()
            .with_order(8);
        let (a, b) = (2.0, -3.0);
        let lambda = 0.7;

        let r1 = residual(&spec1, lambda, &SolutionRep::Series(&x), (0.0, 1.0)).unwrap();
        let r2 = residual(&spec2, lambda, &SolutionRep::Series(&y), (0.0, 1.0)).unwrap();

        let mut spec12 = sample_spec(0.0);
        spec12.f = PowerSeries::combine(a, &spec1.f, b, &spec2.f).unwrap();
        let xy = PowerSeries::combine(a, &x, b, &y).unwrap();
        let r12 = residual(&spec12, lambda, &SolutionRep::Series(&xy), (0.0, 1.0)).unwrap();

        for ((s12, s1), s2) in r12.samples.iter().zip(&r1.samples).zip(&r2.samples) {
            assert_abs_diff_eq!(s12.1, a * s1.1 + b * s2.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_and_series_applications_agree() {
        // Apply the operator to the order-30 eigenfunction and to an
        // arbitrary polynomial, both ways.
        let spec = sample_spec(0.0);
        let eigen = crate::series_solver::homogeneous_series(&spec, 0, 30).unwrap();
        let poly = PowerSeries::new(vec![1.0, 2.0, -1.0, 0.5, 0.25, -0.2, 0.1, 0.05, -0.01])
            .unwrap()
            .with_order(30);
        for x in [eigen, poly] {
            let series_out = apply_to_series(&spec, &LogPowerSeries::from_series(x.clone()));
            let grid = GridFunction::sample(uniform_nodes(0.0, 1.0, 513), InterpRule::Cubic, |t| {
                x.eval(t)
            })
            .unwrap();
            let grid_out = apply_to_grid(&spec, &grid).unwrap();
            for (&t, &v) in grid_out.nodes().iter().zip(grid_out.values()) {
                assert_abs_diff_eq!(v, series_out.series.p().eval(t), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn truncated_eigenfunction_residual_decays_at_origin() {
        // A series eigenfunction truncated at order N leaves a residual tail
        // ~ t^{N+1}: the log-log slope over dyadic scales matches N+1.
        let spec = sample_spec(0.0);
        let n_trunc = 6;
        let phi = crate::series_solver::homogeneous_series(&spec, 0, n_trunc).unwrap();
        let mut points = Vec::new();
        for &t in &[0.5f64, 0.25, 0.125, 0.0625] {
            let rep = residual(&spec, 1.0, &SolutionRep::Series(&phi), (t / 2.0, t)).unwrap();
            points.push((t.ln(), rep.sup_norm.ln()));
        }
        let n = points.len() as f64;
        let (sx, sy): (f64, f64) = points
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (sxx, sxy): (f64, f64) = points
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let expected = (n_trunc + 1) as f64;
        assert!(
            (slope - expected).abs() <= 0.5,
            "decay slope {slope} not within 0.5 of {expected}"
        );
    }

    #[test]
    fn residual_sup_bounds_every_sample() {
        let spec = sample_spec(2.0);
        let x = PowerSeries::new(vec![1.0, 1.0]).unwrap().with_order(10);
        let rep = residual(&spec, 3.0, &SolutionRep::Series(&x), (0.0, 1.0)).unwrap();
        for &(_, r) in &rep.samples {
            assert!(rep.sup_norm >= r.abs());
        }
        assert!(rep.l2_norm >= 0.0);
    }
}
