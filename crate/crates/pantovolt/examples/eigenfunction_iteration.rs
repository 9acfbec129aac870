//! Eigenfunction by successive approximations, cross-checked against the
//! series construction.
//!
//! The ansatz `phi(t) = t^n + t^{n+eps} v(t)` reduces the eigenvalue problem
//! to a fixed-point equation for `v`, contractive in the weighted norm
//! `max e^{-|t| L} |v(t)|` once `L` is large enough. The two constructions
//! are independent, so their agreement is a strong correctness check.
//!
//! Run with: `cargo run --example eigenfunction_iteration`

use pantovolt::fixed_point::eigenfunction_by_iteration;
use pantovolt::series_solver::homogeneous_series;
use pantovolt::{BivariateKernel, PowerSeries, ProblemSpec};

fn main() -> pantovolt::Result<()> {
    let spec = ProblemSpec::new(
        0.5,
        PowerSeries::constant(1.0, 0),
        BivariateKernel::constant(1.0),
        PowerSeries::zeros(0),
        1.0,
    )?;

    for n in [0usize, 1, 2] {
        let run = eigenfunction_by_iteration(&spec, n)?;
        println!(
            "n = {n}: L* = {:.4}, q(L*) = {:.4}, {} iterations, measured ratio {:.4}",
            run.estimate.l_star, run.estimate.q_of_l, run.trace.iterations, run.trace.ratio
        );

        // Compare against the independent series construction, both
        // normalized at t = 1/2.
        let series = homogeneous_series(&spec, n, 30)?;
        let series_scale = series.eval(0.5);
        let grid_scale = run.phi.eval(0.5);
        let mut worst = 0.0f64;
        for (&t, &v) in run.phi.nodes().iter().zip(run.phi.values()) {
            if t <= 0.5 {
                worst = worst.max((series.eval(t) / series_scale - v / grid_scale).abs());
            }
        }
        println!("        sup |phi_series - phi_iterate| on [0, 1/2] = {worst:.3e}");
    }

    // The last few weighted-norm differences show the geometric decay.
    let run = eigenfunction_by_iteration(&spec, 0)?;
    println!("\ntail of the difference sequence for n = 0:");
    let diffs = &run.trace.diffs;
    for (k, d) in diffs.iter().enumerate().skip(diffs.len().saturating_sub(6)) {
        println!("  ||v_{} - v_{}||_L = {d:.3e}", k + 1, k);
    }
    Ok(())
}
