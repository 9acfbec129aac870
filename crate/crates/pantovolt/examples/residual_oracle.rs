//! The residual oracle: every solution is verified by substitution.
//!
//! The operator is applied two independent ways - exactly in the series
//! algebra and numerically by quadrature on a grid - and the residual
//! `lambda x - A x - f` is always computed with the quadrature route, so it
//! cannot inherit mistakes from the solver under test.
//!
//! Run with: `cargo run --example residual_oracle`

use pantovolt::grid::{uniform_nodes, GridFunction, InterpRule};
use pantovolt::operator::{apply_to_grid, apply_to_series, residual, SolutionRep};
use pantovolt::series_solver::homogeneous_series;
use pantovolt::{BivariateKernel, LogPowerSeries, PowerSeries, ProblemSpec};

fn main() -> pantovolt::Result<()> {
    let spec = ProblemSpec::new(
        0.5,
        PowerSeries::constant(1.0, 0),
        BivariateKernel::constant(1.0),
        PowerSeries::zeros(0),
        1.0,
    )?;

    // Apply A to the truncated eigenfunction in the series algebra...
    let phi = homogeneous_series(&spec, 0, 30)?;
    let applied = apply_to_series(&spec, &LogPowerSeries::from_series(phi.clone()));
    println!(
        "series route: truncation overflow above order 30 = {:.3e}",
        applied.truncation_overflow
    );

    // ...and on a sampled grid; the two must agree at the nodes.
    let grid = GridFunction::sample(uniform_nodes(0.0, 1.0, 513), InterpRule::Cubic, |t| {
        phi.eval(t)
    })?;
    let applied_grid = apply_to_grid(&spec, &grid)?;
    let mut worst = 0.0f64;
    for (&t, &v) in applied_grid.nodes().iter().zip(applied_grid.values()) {
        worst = worst.max((v - applied.series.p().eval(t)).abs());
    }
    println!("grid vs series application: sup difference = {worst:.3e}");

    // An eigenfunction makes lambda x - A x vanish; a non-eigenfunction does
    // not. The oracle quantifies both.
    let good = residual(&spec, 1.0, &SolutionRep::Series(&phi), (0.0, 1.0))?;
    println!(
        "\nresidual of the order-30 eigenfunction:  sup = {:.3e}",
        good.sup_norm
    );

    let wrong = PowerSeries::new(vec![1.0, 1.0]).unwrap().with_order(30);
    let bad = residual(&spec, 1.0, &SolutionRep::Series(&wrong), (0.0, 1.0))?;
    println!(
        "residual of the imposter 1 + t:          sup = {:.3e}",
        bad.sup_norm
    );

    // Truncating earlier leaves a visible residual tail ~ t^(N+1).
    println!("\ntruncation sweep (residual on [0, 1/2]):");
    for order in [4usize, 6, 8, 10] {
        let phi = homogeneous_series(&spec, 0, order)?;
        let report = residual(&spec, 1.0, &SolutionRep::Series(&phi), (1e-6, 0.5))?;
        println!("  order {order:2}: sup = {:.3e}", report.sup_norm);
    }
    Ok(())
}
