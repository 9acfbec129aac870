//! Enumerate the eigenvalue family and verify the spectral hypotheses.
//!
//! The operator `A x = int_0^t x(s) ds + x(t/2)` has `a(0) = 1` and
//! `alpha = 1/2`, so the values `lambda_n = 2^-n` are eigenvalues.
//!
//! Run with: `cargo run --example spectrum`

use pantovolt::spectrum::{check_conditions, eigenvalues, estimate_contraction};
use pantovolt::{BivariateKernel, PowerSeries, ProblemSpec};

fn main() -> pantovolt::Result<()> {
    let spec = ProblemSpec::new(
        0.5,
        PowerSeries::constant(1.0, 0),
        BivariateKernel::constant(1.0),
        PowerSeries::zeros(0),
        1.0,
    )?;

    let report = eigenvalues(&spec, 8)?;
    println!(
        "eigenvalues lambda_n = a(0) alpha^n with a(0) = {}, alpha = {}:",
        report.a0, report.alpha
    );
    for (n, lambda) in &report.eigenvalues {
        println!("  lambda_{n} = {lambda}");
    }

    // The eigenvalue claim rests on two inequalities; check them numerically
    // at the default Hoelder exponent.
    let eps = spec.options.epsilon;
    let conditions = check_conditions(&spec, eps)?;
    println!(
        "\nconditions at eps = {eps}: l_hat = {:.6}, q_hat = {:.6}, holds = {}",
        conditions.l_hat, conditions.q_hat, conditions.holds
    );

    // With the conditions verified, the eigenfunction construction is a
    // contraction in the weighted norm for any L >= L*.
    let estimate = estimate_contraction(&spec, 0, eps, &conditions)?;
    println!(
        "contraction at n = 0: L* = {:.6}, q(L*) = {:.6}, sup |K| = {}",
        estimate.l_star, estimate.q_of_l, estimate.k_max
    );
    Ok(())
}
