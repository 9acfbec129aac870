//! The kernel-free special case: a pure functional equation.
//!
//! `x(t) = x(t/2) + 2` has the constants as homogeneous solutions, and the
//! forcing sits at the eigenvalue lambda_0 = a(0) = 1. A solution with a
//! logarithmic singularity does the job: `x(t) = B ln t` with
//! `B = -2 / ln(1/2) = 2 / ln 2`, since `B ln t - B ln(t/2) = B ln 2`.
//!
//! Run with: `cargo run --example pure_functional_equation`

use pantovolt::operator::{residual, SolutionRep};
use pantovolt::series_solver::general_solution;
use pantovolt::{BivariateKernel, PowerSeries, ProblemSpec};

fn main() -> pantovolt::Result<()> {
    let spec = ProblemSpec::new(
        0.5,
        PowerSeries::constant(1.0, 0),
        BivariateKernel::zero(),
        PowerSeries::constant(2.0, 0),
        1.0,
    )?;

    let solution = general_solution(&spec, 1.0, 0.0, 30)?;
    let b = solution.particular.q().coeff(0);
    println!("solver result: x(t) = {b:.12} * ln t  (+ free constant)");
    println!(
        "closed form:   B = -2/ln(alpha) = {:.12}",
        -2.0 / 0.5f64.ln()
    );

    let tail_is_zero = (1..=30).all(|i| solution.particular.q().coeff(i) == 0.0)
        && solution.particular.p().is_zero();
    println!("higher log coefficients and the non-log part vanish: {tail_is_zero}");

    let full = solution.full();
    let report = residual(&spec, 1.0, &SolutionRep::LogSeries(&full), (0.01, 1.0))?;
    println!(
        "substitution residual on [0.01, 1]: sup = {:.3e}",
        report.sup_norm
    );

    println!("\ndirect check of x(t) - x(t/2) - 2 at a few points:");
    for t in [0.02, 0.1, 0.5, 1.0] {
        let defect = full.eval(t)? - full.eval(0.5 * t)? - 2.0;
        println!("  t = {t}: {defect:+.3e}");
    }
    Ok(())
}
