//! Truncated power series and log-augmented power series.
//!
//! A [`PowerSeries`] is a polynomial `c0 + c1 t + ... + cN t^N` carried with an
//! explicit truncation order `N`; it represents both exact polynomial data
//! (coefficient functions, forcings) and truncated series solutions. A
//! [`LogPowerSeries`] is the pair `P(t) + ln t * Q(t)` needed for solutions with
//! a logarithmic singular point at the origin.
//!
//! All operations are pure and the types are immutable after construction, so
//! values can be shared freely across threads.

use crate::error::{Error, Result};

/// Truncated real power series `sum_{i=0}^{N} c_i t^i`.
///
/// The truncation order is `coeffs.len() - 1` and is carried explicitly:
/// binary operations either demand equal orders ([`PowerSeries::combine`]) or
/// align to a common order by zero padding ([`PowerSeries::multiply`]).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients `c0..cN`. Fails on non-finite
    /// entries; an empty list is the zero series of order 0.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        for (index, &value) in coeffs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoefficient { index, value });
            }
        }
        if coeffs.is_empty() {
            return Ok(Self { coeffs: vec![0.0] });
        }
        Ok(Self { coeffs })
    }

    /// Zero series of the given truncation order.
    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order + 1],
        }
    }

    /// Constant series `c` of the given truncation order.
    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// Monomial `t^k` of the given truncation order (`k <= order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        if k <= order {
            coeffs[k] = 1.0;
        }
        Self { coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `c_i`, zero beyond the truncation order.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// True when every stored coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Copy padded (with zeros) or truncated to the given order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        Self { coeffs }
    }

    /// Coefficient-wise `a*x + b*y`. The operands must share one truncation
    /// order; callers pad explicitly via [`PowerSeries::with_order`] when they
    /// intend an order change.
    pub fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        if x.order() != y.order() {
            return Err(Error::OrderMismatch {
                left: x.order(),
                right: y.order(),
            });
        }
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&xc, &yc)| a * xc + b * yc)
            .collect();
        Ok(Self { coeffs })
    }

    /// Coefficient-wise scaling `a*x`.
    pub fn scale(&self, a: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| a * c).collect(),
        }
    }

    /// Antiderivative vanishing at 0: `c_{i+1} = x_i / (i+1)`, `c_0 = 0`.
    /// The truncation order grows by one.
    pub fn integrate_from_zero(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = c / (i as f64 + 1.0);
        }
        Self { coeffs }
    }

    /// Argument contraction `x(alpha t)`: coefficient `c_i` becomes
    /// `c_i alpha^i`. Requires `0 < alpha < 1`.
    pub fn dilate(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::ContractionFactor(alpha));
        }
        let mut factor = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let scaled = c * factor;
                factor *= alpha;
                scaled
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// Cauchy product truncated at `max(order(x), order(y))`.
    pub fn multiply(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut coeffs = vec![0.0; order + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 || i > order {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Multiplication by `t^k`; the truncation order grows by `k` so no
    /// coefficient is lost.
    pub fn shifted_up(&self, k: usize) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + k];
        coeffs[k..].copy_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Largest coefficient magnitude at indices strictly above `order`.
    pub(crate) fn overflow_above(&self, order: usize) -> f64 {
        self.coeffs
            .iter()
            .skip(order + 1)
            .fold(0.0f64, |m, &c| m.max(c.abs()))
    }
}

/// Log-augmented series `P(t) + ln t * Q(t)`, defined for `t > 0`.
///
/// `P` and `Q` share one truncation order. This is the solution class needed
/// when the inhomogeneous equation is forced at a resonant eigenvalue; only
/// the first power of `ln t` ever arises there.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPowerSeries {
    p: PowerSeries,
    q: PowerSeries,
}

impl LogPowerSeries {
    pub fn new(p: PowerSeries, q: PowerSeries) -> Result<Self> {
        if p.order() != q.order() {
            return Err(Error::OrderMismatch {
                left: p.order(),
                right: q.order(),
            });
        }
        Ok(Self { p, q })
    }

    /// Embeds a plain series (zero log part).
    pub fn from_series(p: PowerSeries) -> Self {
        let q = PowerSeries::zeros(p.order());
        Self { p, q }
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            p: PowerSeries::zeros(order),
            q: PowerSeries::zeros(order),
        }
    }

    /// Non-log part `P`.
    pub fn p(&self) -> &PowerSeries {
        &self.p
    }

    /// Log part `Q`.
    pub fn q(&self) -> &PowerSeries {
        &self.q
    }

    pub fn order(&self) -> usize {
        self.p.order()
    }

    /// True when the log part is identically zero.
    pub fn is_log_free(&self) -> bool {
        self.q.is_zero()
    }

    /// Evaluates `P(t) + ln t * Q(t)`; the representation only exists for
    /// `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::LogDomain(t));
        }
        Ok(self.p.eval(t) + t.ln() * self.q.eval(t))
    }

    /// Coefficient-wise `a*x + b*y` on both parts.
    pub fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        Ok(Self {
            p: PowerSeries::combine(a, &x.p, b, &y.p)?,
            q: PowerSeries::combine(a, &x.q, b, &y.q)?,
        })
    }

    /// Antiderivative vanishing at 0 (for the non-log part; the log part uses
    /// `int_0^t s^i ln s ds = t^{i+1} ln t / (i+1) - t^{i+1} / (i+1)^2`).
    /// The truncation order grows by one.
    pub fn integrate_from_zero(&self) -> Self {
        let mut p = self.p.integrate_from_zero();
        let q = self.q.integrate_from_zero();
        // The -t^{i+1}/(i+1)^2 residue of each log-part term lands in P.
        for (i, &b) in self.q.coeffs().iter().enumerate() {
            let k = i as f64 + 1.0;
            p.coeffs[i + 1] -= b / (k * k);
        }
        Self { p, q }
    }

    /// Argument contraction: `ln(alpha t) = ln t + ln alpha`, so the log part
    /// dilates in place while the non-log part picks up `ln alpha * Q(alpha t)`.
    pub fn dilate(&self, alpha: f64) -> Result<Self> {
        let qd = self.q.dilate(alpha)?;
        let pd = self.p.dilate(alpha)?;
        let p = PowerSeries::combine(1.0, &pd, alpha.ln(), &qd)?;
        Ok(Self { p, q: qd })
    }

    /// Multiplies both parts by a plain polynomial.
    pub fn multiply_series(&self, poly: &PowerSeries) -> Self {
        let p = self.p.multiply(poly);
        let q = self.q.multiply(poly);
        let order = p.order().max(q.order());
        Self {
            p: p.with_order(order),
            q: q.with_order(order),
        }
    }

    /// Multiplication by `t^k` on both parts.
    pub fn shifted_up(&self, k: usize) -> Self {
        Self {
            p: self.p.shifted_up(k),
            q: self.q.shifted_up(k),
        }
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self {
            p: self.p.with_order(order),
            q: self.q.with_order(order),
        }
    }

    pub(crate) fn overflow_above(&self, order: usize) -> f64 {
        self.p
            .overflow_above(order)
            .max(self.q.overflow_above(order))
    }
}
