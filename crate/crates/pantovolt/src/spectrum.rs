//! Eigenvalue enumeration and hypothesis verification.
//!
//! For the operator `A x = int_0^t K(t,s) x(s) ds + a(t) x(alpha t)` with
//! continuous data, `a(0) != 0` and `0 < alpha < 1`, the values
//! `lambda_n = a(0) alpha^n` are eigenvalues provided two inequalities hold:
//!
//! 1. `|a(t) - a(0)| <= l(t) |t|^eps` with `l` continuous and `eps` in (0,1);
//! 2. `|a(t)| alpha^eps <= q |a(0)|` with `q < 1`.
//!
//! `check_conditions` verifies both numerically on a dense grid and
//! `estimate_contraction` turns the verified bounds into a weighted-norm
//! contraction constant for the fixed-point construction of eigenfunctions.
//! Nothing here claims these are *all* the eigenvalues; the reported list is
//! exactly the `a(0) alpha^n` family.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// Number of sample points for the condition suprema.
const CONDITION_GRID: usize = 2048;

/// Floor for the contraction weight when the kernel vanishes (any positive
/// weight works in that case).
const WEIGHT_FLOOR: f64 = 1.0;

/// Safety margin applied to the weight bound estimated from grid suprema.
const WEIGHT_MARGIN: f64 = 0.1;

/// The eigenvalue `a(0) alpha^n`, built by iterated multiplication so that
/// consecutive eigenvalues differ by exactly one multiplication by alpha.
pub fn eigenvalue(spec: &ProblemSpec, n: usize) -> Result<f64> {
    let a0 = spec.a_at_origin()?;
    let mut lambda = a0;
    for _ in 0..n {
        lambda *= spec.alpha;
    }
    Ok(lambda)
}

/// The first `count` eigenvalues `(n, a(0) alpha^n)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub a0: f64,
    pub alpha: f64,
    pub eigenvalues: Vec<(usize, f64)>,
}

pub fn eigenvalues(spec: &ProblemSpec, count: usize) -> Result<SpectralReport> {
    let a0 = spec.a_at_origin()?;
    let mut eigenvalues = Vec::with_capacity(count);
    let mut lambda = a0;
    for n in 0..count {
        eigenvalues.push((n, lambda));
        lambda *= spec.alpha;
    }
    Ok(SpectralReport {
        a0,
        alpha: spec.alpha,
        eigenvalues,
    })
}

/// Numerical verification of the two spectral hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// The Hoelder exponent the conditions were checked at.
    pub epsilon: f64,
    /// Grid supremum of `|a(t) - a(0)| / |t|^eps` (the `l(t)` bound).
    pub l_hat: f64,
    /// Grid supremum of `|a(t)| alpha^eps / |a(0)|`.
    pub q_hat: f64,
    /// Whether condition 2 holds: `q_hat < 1`.
    pub holds: bool,
}

/// Evaluates both suprema on a dense grid over [-T, T] excluding the origin
/// (the ratio in condition 1 is 0/0 there; for polynomial `a` the limit is 0,
/// so the exclusion is harmless).
pub fn check_conditions(spec: &ProblemSpec, epsilon: f64) -> Result<ConditionReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonRange(epsilon));
    }
    let a0 = spec.a_at_origin()?;
    let radius = spec.radius;

    // (a(t) - a(0)) / |t|^eps evaluated cancellation-free as
    // sign(t) |t|^{1-eps} * ((a(t) - a(0)) / t), the latter a polynomial.
    let reduced: Vec<f64> = spec.a.coeffs().iter().skip(1).copied().collect();
    let reduced = crate::series::PowerSeries::new(reduced).expect("finite by construction");

    let alpha_eps = spec.alpha.powf(epsilon);
    let mut l_hat = 0.0f64;
    let mut q_hat = 0.0f64;
    for i in 0..CONDITION_GRID {
        let t = -radius + 2.0 * radius * i as f64 / (CONDITION_GRID - 1) as f64;
        if t == 0.0 {
            continue;
        }
        l_hat = l_hat.max(t.abs().powf(1.0 - epsilon) * reduced.eval(t).abs());
        q_hat = q_hat.max(spec.a.eval(t).abs() * alpha_eps / a0.abs());
    }

    Ok(ConditionReport {
        epsilon,
        l_hat,
        q_hat,
        holds: q_hat < 1.0,
    })
}

/// Weighted-norm contraction data for the fixed-point map at eigenvalue
/// index `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionEstimate {
    pub n: usize,
    /// Weight L* >= the threshold beyond which the map contracts.
    pub l_star: f64,
    /// Bound on the map's Lipschitz constant in the L*-weighted norm.
    pub q_of_l: f64,
    /// Supremum of |K| over the integration triangle.
    pub k_max: f64,
}

/// Derives the contraction constants from verified conditions: the functional
/// term contributes at most `q_hat` and the integral term at most
/// `K_max / (|a(0)| alpha^n L)`, so
/// `L* = K_max / (|a(0)| alpha^n (1 - q_hat))` (with a 10% margin) makes the
/// combined factor `q_of_L < 1`.
pub fn estimate_contraction(
    spec: &ProblemSpec,
    n: usize,
    _epsilon: f64,
    report: &ConditionReport,
) -> Result<ContractionEstimate> {
    if !report.holds {
        return Err(Error::ConditionsNotVerified);
    }
    let a0 = spec.a_at_origin()?;
    let k_max = spec.kernel.sup_on_triangle(spec.radius);
    let scale = a0.abs() * spec.alpha.powi(n as i32);
    let (l_star, q_of_l) = if k_max == 0.0 {
        (WEIGHT_FLOOR, report.q_hat)
    } else {
        let l_star = k_max / (scale * (1.0 - report.q_hat)) * (1.0 + WEIGHT_MARGIN);
        (l_star, report.q_hat + k_max / (scale * l_star))
    };
    Ok(ContractionEstimate {
        n,
        l_star,
        q_of_l,
        k_max,
    })
}
