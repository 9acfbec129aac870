//! Composite Gauss-Legendre quadrature.
//!
//! Nodes and weights are computed once per rule by Newton iteration on the
//! Legendre polynomial (the classic `gauleg` construction), so any panel order
//! is available. Integrals with an integrable singularity at the origin
//! (`ln s`, `s^eps`) are handled by geometric panel refinement toward zero.

/// An n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the n-point rule (n >= 1). Nodes converge to machine precision
    /// in a handful of Newton steps.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess for the i-th positive root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence: p1 = P_n(x), dp = P_n'(x).
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                if n == 1 {
                    p1 = x;
                    p0 = 1.0;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over [a, b] with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Integrates `f` over consecutive panels given by `breaks` (ascending).
    pub fn integrate_segments<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        let mut sum = 0.0;
        for pair in breaks.windows(2) {
            sum += self.integrate(pair[0], pair[1], &mut f);
        }
        sum
    }

    /// Integrates `f` over [0, b] (b > 0) with `panels` base panels, the first
    /// of which is refined geometrically toward 0 so that integrable endpoint
    /// singularities (ln s, s^eps) are resolved to near machine precision.
    pub fn integrate_from_origin<F: FnMut(f64) -> f64>(&self, b: f64, panels: usize, f: F) -> f64 {
        if b == 0.0 {
            return 0.0;
        }
        debug_assert!(b > 0.0);
        let breaks = origin_refined_breaks(b, panels.max(1));
        self.integrate_segments(&breaks, f)
    }
}

/// Panel boundaries for [0, b]: `panels` uniform panels whose first panel is
/// subdivided geometrically (ratio 2) down to width ~ b * 2^-52. The tiny
/// remainder [0, b*2^-52] is integrated as a single panel; for integrable
/// singularities its contribution is below rounding.
pub fn origin_refined_breaks(b: f64, panels: usize) -> Vec<f64> {
    let h = b / panels as f64;
    let mut breaks = Vec::with_capacity(panels + 53);
    breaks.push(0.0);
    let mut edge = h / 2.0f64.powi(52);
    while edge < h {
        breaks.push(edge);
        edge *= 2.0;
    }
    for k in 1..=panels {
        breaks.push(b * k as f64 / panels as f64);
    }
    breaks
}
