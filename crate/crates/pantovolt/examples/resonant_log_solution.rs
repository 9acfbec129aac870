//! Solving the forced equation at a resonant eigenvalue.
//!
//! `x(t) = int_0^t x(s) ds + x(t/2) + 2` is forced exactly at the eigenvalue
//! lambda_0 = 1, so no plain power series solves it: the particular solution
//! picks up a logarithm, `x(t) = P(t) + ln t * Q(t)`, and the general
//! solution is `c * phi + x` with phi the eigenfunction and c free.
//!
//! Run with: `cargo run --example resonant_log_solution`

use pantovolt::operator::{residual, SolutionRep};
use pantovolt::series_solver::{detect_resonance, general_solution};
use pantovolt::{BivariateKernel, PowerSeries, ProblemSpec};

fn main() -> pantovolt::Result<()> {
    let spec = ProblemSpec::new(
        0.5,
        PowerSeries::constant(1.0, 0),
        BivariateKernel::constant(1.0),
        PowerSeries::constant(2.0, 0),
        1.0,
    )?;
    let lambda = 1.0;

    let info = detect_resonance(&spec, lambda, 30)?;
    println!(
        "lambda = {lambda}: resonant = {}, order = {:?}",
        info.resonant, info.order
    );

    let solution = general_solution(&spec, lambda, 0.0, 30)?;
    let ln2 = 2.0f64.ln();
    println!("\nlog-part coefficients b_i (first four):");
    for i in 0..4 {
        println!("  b_{i} = {:.12}", solution.particular.q().coeff(i));
    }
    println!(
        "  reference: b_0 = 2/ln 2 = {:.12}, b_1 = 4/ln 2 = {:.12}",
        2.0 / ln2,
        4.0 / ln2
    );
    println!("\nnon-log coefficients m_i (first four, m_0 normalized to 0):");
    for i in 0..4 {
        println!("  m_{i} = {:.12}", solution.particular.p().coeff(i));
    }

    // The free constant shifts the solution by a multiple of the
    // eigenfunction without touching the residual.
    println!("\nsubstitution residual on [0.01, 1] for several free constants:");
    for c in [0.0, 1.0, 5.0] {
        let solution = general_solution(&spec, lambda, c, 30)?;
        let full = solution.full();
        let report = residual(&spec, lambda, &SolutionRep::LogSeries(&full), (0.01, 1.0))?;
        println!(
            "  c = {c}: sup = {:.3e}, L2 = {:.3e}",
            report.sup_norm, report.l2_norm
        );
    }

    let solution = general_solution(&spec, lambda, 0.0, 30)?;
    println!("\nx(t) near the singular origin (log blow-up):");
    for t in [0.001, 0.01, 0.1, 0.5, 1.0] {
        println!("  x({t}) = {:.9}", solution.eval(t)?);
    }
    Ok(())
}
