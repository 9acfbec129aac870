//! Sampled functions on a node set with piecewise-cubic interpolation.

use crate::error::{Error, Result};

/// Identifier of the piecewise-cubic interpolation rule used between nodes.
///
/// Both rules are cubic splines with not-a-knot end conditions: the spline is
/// exact on cubics and keeps its fourth-order accuracy up to the ends, where
/// a natural (zero-curvature) end condition would leave an O(h^2) boundary
/// layer on any function with curvature there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterpRule {
    /// Cubic spline in the node coordinate t.
    Cubic,
    /// Cubic spline in the stretched coordinate `u = sign(t) |t|^(1/power)`.
    ///
    /// Suits grids graded as `t_j ~ (j/M)^power` and functions that behave
    /// like `|t|^(1/power)` at the origin, where a plain cubic in t loses
    /// accuracy: in u such functions are smooth and the spline recovers its
    /// full fourth-order error.
    CubicStretched { power: f64 },
}

impl InterpRule {
    fn to_coord(self, t: f64) -> f64 {
        match self {
            InterpRule::Cubic => t,
            InterpRule::CubicStretched { power } => t.signum() * t.abs().powf(1.0 / power),
        }
    }
}

/// A function sampled on strictly increasing nodes, evaluated between nodes by
/// the grid's interpolation rule. Immutable after construction; the spline
/// coefficients are precomputed so evaluation is lock-free and thread-safe.
#[derive(Debug, Clone)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    rule: InterpRule,
    /// Spline abscissae (nodes mapped through the rule's coordinate).
    coords: Vec<f64>,
    /// Second derivatives of the natural spline in the rule's coordinate.
    second_derivs: Vec<f64>,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, rule: InterpRule) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::GridNodes(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.len() < 2 {
            return Err(Error::GridNodes("need at least two nodes".into()));
        }
        for w in nodes.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::GridNodes(format!(
                    "nodes not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&bad) = nodes.iter().chain(values.iter()).find(|v| !v.is_finite()) {
            return Err(Error::GridNodes(format!("non-finite entry {bad}")));
        }
        if let InterpRule::CubicStretched { power } = rule {
            if power < 1.0 || !power.is_finite() {
                return Err(Error::GridNodes(format!(
                    "stretch power must be >= 1, got {power}"
                )));
            }
        }
        let coords: Vec<f64> = nodes.iter().map(|&t| rule.to_coord(t)).collect();
        let second_derivs = spline_second_derivs(&coords, &values);
        Ok(Self {
            nodes,
            values,
            rule,
            coords,
            second_derivs,
        })
    }

    /// Samples a closure on the given nodes.
    pub fn sample<F: FnMut(f64) -> f64>(
        nodes: Vec<f64>,
        rule: InterpRule,
        mut f: F,
    ) -> Result<Self> {
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::new(nodes, values, rule)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rule(&self) -> InterpRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Domain hull [first node, last node].
    pub fn hull(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// True when `t` lies within the node hull (inclusive).
    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.hull();
        t >= lo && t <= hi
    }

    /// Spline evaluation at `t`. Inside the hull this is the natural cubic
    /// spline in the rule's coordinate; outside it continues the boundary
    /// cubic (callers that must not extrapolate check [`Self::contains`]).
    pub fn eval(&self, t: f64) -> f64 {
        let u = self.rule.to_coord(t);
        let n = self.coords.len();
        let hi = self.coords.partition_point(|&c| c < u).clamp(1, n - 1);
        let lo = hi - 1;
        let h = self.coords[hi] - self.coords[lo];
        let a = (self.coords[hi] - u) / h;
        let b = (u - self.coords[lo]) / h;
        a * self.values[lo]
            + b * self.values[hi]
            + ((a * a * a - a) * self.second_derivs[lo] + (b * b * b - b) * self.second_derivs[hi])
                * h
                * h
                / 6.0
    }

    /// New grid function on the same nodes and rule.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.nodes.clone(), values, self.rule)
    }

    /// Largest |self - other| over this grid's nodes (both must share nodes).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Spline second derivatives with not-a-knot end conditions (third
/// derivative continuous across the first and last interior knots). Falls
/// back to the natural condition below four nodes, where not-a-knot is
/// degenerate.
fn spline_second_derivs(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut y2 = vec![0.0; n];
    if n < 4 {
        return natural_second_derivs(xs, ys);
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = ys
        .windows(2)
        .zip(&h)
        .map(|(w, &hk)| (w[1] - w[0]) / hk)
        .collect();

    // Unknowns y2[1..=n-2]; the end values are eliminated through
    //   y2[0]   = ((h0+h1) y2[1] - h0 y2[2]) / h1,
    //   y2[n-1] = ((h_{n-2}+h_{n-3}) y2[n-2] - h_{n-2} y2[n-3]) / h_{n-3}.
    let m = n - 2;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let j = k + 1;
        lower[k] = h[j - 1];
        diag[k] = 2.0 * (h[j - 1] + h[j]);
        upper[k] = h[j];
        rhs[k] = 6.0 * (slope[j] - slope[j - 1]);
    }
    diag[0] += h[0] * (h[0] + h[1]) / h[1];
    upper[0] -= h[0] * h[0] / h[1];
    let (ha, hb) = (h[n - 2], h[n - 3]);
    diag[m - 1] += ha * (ha + hb) / hb;
    lower[m - 1] -= ha * ha / hb;

    // Thomas sweep.
    for k in 1..m {
        let w = lower[k] / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    y2[m] = rhs[m - 1] / diag[m - 1];
    for k in (0..m - 1).rev() {
        y2[k + 1] = (rhs[k] - upper[k] * y2[k + 2]) / diag[k];
    }
    y2[0] = ((h[0] + h[1]) * y2[1] - h[0] * y2[2]) / h[1];
    y2[n - 1] = ((ha + hb) * y2[n - 2] - ha * y2[n - 3]) / hb;
    y2
}

/// Natural-end fallback for tiny node sets.
fn natural_second_derivs(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut y2 = vec![0.0; n];
    if n < 3 {
        return y2;
    }
    let mut u = vec![0.0; n - 1];
    for i in 1..n - 1 {
        let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        u[i] =
            (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        u[i] = (6.0 * u[i] / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
    }
    for k in (0..n - 2).rev() {
        y2[k + 1] = y2[k + 1] * y2[k + 2] + u[k + 1];
    }
    y2
}

/// Uniform nodes on [a, b] inclusive.
pub fn uniform_nodes(a: f64, b: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Graded nodes `t_j = span * (j/M)^power` on [0, span], endpoints included.
/// Grading clusters nodes at the origin where solutions carry `|t|^eps`
/// behaviour.
pub fn graded_nodes(span: f64, count: usize, power: f64) -> Vec<f64> {
    let count = count.max(2);
    let m = (count - 1) as f64;
    (0..count)
        .map(|j| span * (j as f64 / m).powf(power))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn spline_reproduces_nodes_exactly() {
        let nodes = uniform_nodes(0.0, 1.0, 17);
        let g = GridFunction::sample(nodes.clone(), InterpRule::Cubic, |t| t.sin()).unwrap();
        for &t in &nodes {
            assert_abs_diff_eq!(g.eval(t), t.sin(), epsilon = 1e-15);
        }
    }

    #[test]
    fn spline_reproduces_cubics_exactly() {
        // Not-a-knot end conditions make the spline exact on cubics,
        // boundary intervals included.
        let f = |t: f64| 2.0 - t + 3.0 * t * t - 0.5 * t * t * t;
        let g = GridFunction::sample(uniform_nodes(0.0, 1.0, 33), InterpRule::Cubic, f).unwrap();
        let mut t = 0.0;
        while t <= 1.0 {
            assert_abs_diff_eq!(g.eval(t), f(t), epsilon = 1e-12);
            t += 0.017;
        }
    }

    #[test]
    fn spline_is_fourth_order_between_nodes() {
        let g = GridFunction::sample(uniform_nodes(0.0, 1.0, 257), InterpRule::Cubic, |t| {
            (2.0 * t).exp()
        })
        .unwrap();
        let mut worst = 0.0f64;
        let mut t = 0.0;
        while t < 1.0 {
            worst = worst.max((g.eval(t) - (2.0 * t).exp()).abs());
            t += 0.0013;
        }
        assert!(worst < 1e-8, "spline error {worst:e}");
    }

    #[test]
    fn stretched_rule_captures_sqrt_behaviour() {
        // v(t) = sqrt(t) is smooth in u = sqrt(t); the stretched spline on a
        // quadratically graded grid is near-exact, where the plain cubic
        // would lose several digits near the origin.
        let nodes = graded_nodes(1.0, 257, 2.0);
        let rule = InterpRule::CubicStretched { power: 2.0 };
        let g = GridFunction::sample(nodes, rule, |t| t.sqrt()).unwrap();
        for &t in &[1e-6, 1e-4, 0.01, 0.1, 0.37, 0.9] {
            assert_relative_eq!(g.eval(t), t.sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_node_sets() {
        let rule = InterpRule::Cubic;
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0], rule).is_err());
        assert!(GridFunction::new(vec![0.0], vec![1.0], rule).is_err());
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 2.0], rule).is_err());
        assert!(GridFunction::new(vec![1.0, 0.5], vec![1.0, 2.0], rule).is_err());
        assert!(GridFunction::new(vec![0.0, f64::NAN], vec![1.0, 2.0], rule).is_err());
    }

    #[test]
    fn graded_nodes_span_domain() {
        let nodes = graded_nodes(2.0, 65, 2.0);
        assert_eq!(nodes[0], 0.0);
        assert_eq!(*nodes.last().unwrap(), 2.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        // Quadratic grading: first interval is much finer than the last.
        assert!(nodes[1] < (nodes[64] - nodes[63]) / 16.0);
    }
}
