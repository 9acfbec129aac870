//! The method of undetermined coefficients.
//!
//! Substituting a truncated series `x(t) = sum c_m t^m` into
//! `lambda x = A x + f` and matching order by order gives
//!
//! ```text
//! (lambda - a(0) alpha^m) c_m = sum_{j>=1} a_j alpha^{m-j} c_{m-j}
//!                             + sum_{p+q+1+i=m} kappa_pq c_i / (q+i+1)
//!                             + f_m
//! ```
//!
//! where the right-hand side involves only lower orders. Away from the
//! eigenvalues the divisor never vanishes and the recurrence solves the
//! inhomogeneous equation directly. At `lambda = a(0) alpha^N` the order-N
//! equation degenerates: the homogeneous equation gains a free constant
//! (normalized here to `c_N = 1`), and particular solutions require a
//! logarithmic term `x(t) = P(t) + ln t Q(t)` whose log part satisfies the
//! homogeneous recurrence with `b_N` fixed by the non-log matching at order N
//! (the non-log coefficient `m_N` is the free constant, normalized to 0).

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::series::{LogPowerSeries, PowerSeries};
use crate::spectrum::eigenvalue;

/// Whether a spectral parameter collides with the eigenvalue family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceInfo {
    pub resonant: bool,
    /// The colliding index N when resonant.
    pub order: Option<usize>,
    pub lambda: f64,
}

/// Scans `m = 0..=max_order` for `|lambda - a(0) alpha^m| <= rtol |lambda|`.
/// Strict monotonicity of `alpha^m` makes any hit unique.
pub fn detect_resonance(
    spec: &ProblemSpec,
    lambda: f64,
    max_order: usize,
) -> Result<ResonanceInfo> {
    let a0 = spec.a_at_origin()?;
    let rtol = spec.options.resonance_rtol;
    let mut power = a0;
    for m in 0..=max_order {
        if (lambda - power).abs() <= rtol * lambda.abs() {
            return Ok(ResonanceInfo {
                resonant: true,
                order: Some(m),
                lambda,
            });
        }
        power *= spec.alpha;
    }
    Ok(ResonanceInfo {
        resonant: false,
        order: None,
        lambda,
    })
}

/// Shared recurrence state: iterated powers of alpha and the kernel/coefficient
/// sums entering each order.
struct Matcher<'a> {
    spec: &'a ProblemSpec,
    a0: f64,
    alpha_pows: Vec<f64>,
}

impl<'a> Matcher<'a> {
    fn new(spec: &'a ProblemSpec, order: usize) -> Result<Self> {
        let a0 = spec.a_at_origin()?;
        let mut alpha_pows = Vec::with_capacity(order + 1);
        let mut p = 1.0;
        for _ in 0..=order {
            alpha_pows.push(p);
            p *= spec.alpha;
        }
        Ok(Self {
            spec,
            a0,
            alpha_pows,
        })
    }

    /// `sum_{p+q+1+i=m} kappa_pq c_i / (q+i+1)^pow` with pow 1 for the plain
    /// kernel action and 2 for the non-log residue of integrated log terms.
    fn kernel_sum(&self, c: &[f64], m: usize, pow: u32) -> f64 {
        let mut sum = 0.0;
        for (p, row) in self.spec.kernel.rows().iter().enumerate() {
            if p + 1 > m {
                break;
            }
            for (q, &kappa) in row.iter().enumerate() {
                if kappa == 0.0 {
                    continue;
                }
                let Some(i) = m.checked_sub(p + q + 1) else {
                    continue;
                };
                let denom = (q + i + 1) as f64;
                sum += kappa * c[i] / denom.powi(pow as i32);
            }
        }
        sum
    }

    /// Contribution of the non-constant part of `a`:
    /// `sum_{j=1..m} a_j alpha^{m-j} c_{m-j}`.
    fn coefficient_tail(&self, c: &[f64], m: usize) -> f64 {
        let mut sum = 0.0;
        for j in 1..=self.spec.a.order().min(m) {
            let aj = self.spec.a.coeff(j);
            if aj != 0.0 {
                sum += aj * self.alpha_pows[m - j] * c[m - j];
            }
        }
        sum
    }

    fn divisor(&self, lambda: f64, m: usize) -> f64 {
        lambda - self.a0 * self.alpha_pows[m]
    }

    fn divisor_scale(&self, lambda: f64, m: usize) -> f64 {
        lambda.abs().max((self.a0 * self.alpha_pows[m]).abs())
    }
}

/// Homogeneous series solution at `lambda = a(0) alpha^N`: `c_m = 0` below N,
/// `c_N = 1`, and every higher coefficient solved from the recurrence.
pub fn homogeneous_series(spec: &ProblemSpec, n: usize, order: usize) -> Result<PowerSeries> {
    if n > order {
        return Err(Error::Problem(format!(
            "resonant order {n} exceeds truncation order {order}"
        )));
    }
    let matcher = Matcher::new(spec, order)?;
    let lambda = eigenvalue(spec, n)?;
    let rtol = spec.options.resonance_rtol;

    let mut c = vec![0.0; order + 1];
    for m in 0..=order {
        let rhs = matcher.coefficient_tail(&c, m) + matcher.kernel_sum(&c, m, 1);
        if m == n {
            if rhs.abs() > rtol * matcher.divisor_scale(lambda, 0).max(1.0) {
                return Err(Error::ResonantSolvability {
                    order: m,
                    value: rhs,
                });
            }
            c[m] = 1.0;
        } else {
            let divisor = matcher.divisor(lambda, m);
            if divisor.abs() <= rtol * matcher.divisor_scale(lambda, m) {
                return Err(Error::SecondaryResonance { order: m, divisor });
            }
            c[m] = rhs / divisor;
        }
    }
    PowerSeries::new(c)
}

/// Particular solution when `lambda` is no eigenvalue: all divisors are
/// bounded away from zero and the recurrence solves for every coefficient.
pub fn nonresonant_particular(
    spec: &ProblemSpec,
    lambda: f64,
    order: usize,
) -> Result<PowerSeries> {
    let matcher = Matcher::new(spec, order)?;
    let rtol = spec.options.resonance_rtol;

    let mut c = vec![0.0; order + 1];
    for m in 0..=order {
        let rhs = spec.f.coeff(m) + matcher.coefficient_tail(&c, m) + matcher.kernel_sum(&c, m, 1);
        let divisor = matcher.divisor(lambda, m);
        if divisor.abs() <= rtol * matcher.divisor_scale(lambda, m) {
            return Err(Error::NearResonance { lambda, order: m });
        }
        c[m] = rhs / divisor;
    }
    PowerSeries::new(c)
}

/// Particular solution at the resonant eigenvalue `lambda = a(0) alpha^N`,
/// in the log-augmented class `x(t) = P(t) + ln t Q(t)`. Requires constant
/// `a`: a non-constant coefficient changes which orders of the log recurrence
/// resonate, taking the solution outside this class.
///
/// Matching the log terms shows Q satisfies the homogeneous recurrence, with
/// `b_N` left free; matching the non-log terms at order N then fixes `b_N`
/// from the forcing while `m_N` stays free (normalized to 0).
pub fn resonant_log_particular(
    spec: &ProblemSpec,
    n: usize,
    order: usize,
) -> Result<LogPowerSeries> {
    if spec.a.coeffs().iter().skip(1).any(|&c| c != 0.0) {
        return Err(Error::NonConstantCoefficient);
    }
    if n > order {
        return Err(Error::Problem(format!(
            "resonant order {n} exceeds truncation order {order}"
        )));
    }
    let matcher = Matcher::new(spec, order)?;
    let a0 = matcher.a0;
    let lambda = eigenvalue(spec, n)?;
    let ln_alpha = spec.alpha.ln();
    let rtol = spec.options.resonance_rtol;

    let mut b = vec![0.0; order + 1]; // log part Q
    let mut p = vec![0.0; order + 1]; // non-log part P
    for m in 0..=order {
        // ln-coefficient matching: (lambda - a0 alpha^m) b_m = K applied to Q.
        let log_rhs = matcher.kernel_sum(&b, m, 1);
        if m != n {
            let divisor = matcher.divisor(lambda, m);
            if divisor.abs() <= rtol * matcher.divisor_scale(lambda, m) {
                return Err(Error::SecondaryResonance { order: m, divisor });
            }
            b[m] = log_rhs / divisor;
        } else if log_rhs.abs() > rtol * matcher.divisor_scale(lambda, 0).max(1.0) {
            return Err(Error::ResonantSolvability {
                order: m,
                value: log_rhs,
            });
        }

        // Non-log matching:
        // (lambda - a0 alpha^m) p_m = ln(alpha) a0 alpha^m b_m
        //                            + K applied to P
        //                            - (second-power kernel residue on Q)
        //                            + f_m.
        let base = spec.f.coeff(m) + matcher.kernel_sum(&p, m, 1) - matcher.kernel_sum(&b, m, 2);
        if m == n {
            b[m] = -base / (ln_alpha * a0 * matcher.alpha_pows[m]);
            p[m] = 0.0;
        } else {
            let divisor = matcher.divisor(lambda, m);
            p[m] = (base + ln_alpha * a0 * matcher.alpha_pows[m] * b[m]) / divisor;
        }
    }
    LogPowerSeries::new(PowerSeries::new(p)?, PowerSeries::new(b)?)
}

/// General solution `c * phi + particular` at a given spectral parameter.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub lambda: f64,
    /// Particular solution (log part zero in the non-resonant case).
    pub particular: LogPowerSeries,
    /// Homogeneous solution; the zero series when lambda is no eigenvalue.
    pub homogeneous: PowerSeries,
    /// The free constant multiplying the homogeneous part.
    pub free_constant: f64,
    pub resonant_order: Option<usize>,
}

impl SeriesSolution {
    /// The assembled solution `particular + c * homogeneous`.
    pub fn full(&self) -> LogPowerSeries {
        LogPowerSeries::combine(
            1.0,
            &self.particular,
            self.free_constant,
            &LogPowerSeries::from_series(self.homogeneous.clone()),
        )
        .expect("constituents share the truncation order")
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.full().eval(t)
    }
}

/// Dispatches on resonance: at an eigenvalue the solution is
/// `c * homogeneous + log-particular`; otherwise the plain particular series
/// with a zero homogeneous part.
pub fn general_solution(
    spec: &ProblemSpec,
    lambda: f64,
    free_constant: f64,
    order: usize,
) -> Result<SeriesSolution> {
    let info = detect_resonance(spec, lambda, order)?;
    match info.order {
        Some(n) => Ok(SeriesSolution {
            lambda,
            particular: resonant_log_particular(spec, n, order)?,
            homogeneous: homogeneous_series(spec, n, order)?,
            free_constant,
            resonant_order: Some(n),
        }),
        None => Ok(SeriesSolution {
            lambda,
            particular: LogPowerSeries::from_series(nonresonant_particular(spec, lambda, order)?),
            homogeneous: PowerSeries::zeros(order),
            free_constant,
            resonant_order: None,
        }),
    }
}
