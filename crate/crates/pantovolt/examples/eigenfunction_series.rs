//! Eigenfunction by undetermined coefficients.
//!
//! For `phi(t) = int_0^t phi(s) ds + phi(t/2)` (the eigenvalue lambda_0 = 1)
//! the order-by-order matching gives the two-term recurrence
//! `c_m = 2^m / ((2^m - 1) m) c_{m-1}`, whose ratios die off fast enough to
//! make the series entire.
//!
//! Run with: `cargo run --example eigenfunction_series`

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

    let phi = homogeneous_series(&spec, 0, 30)?;
    println!("leading coefficients (normalized to c_0 = 1):");
    for m in 0..=8 {
        println!("  c_{m} = {:+.12e}", phi.coeff(m));
    }

    println!("\nrecurrence ratios c_m / c_{{m-1}} against 2^m / ((2^m - 1) m):");
    for m in 1..=8u32 {
        let got = phi.coeff(m as usize) / phi.coeff(m as usize - 1);
        let expected = 2f64.powi(m as i32) / ((2f64.powi(m as i32) - 1.0) * m as f64);
        println!("  m = {m}: {got:.12}  (expected {expected:.12})");
    }

    // Normalized to c_1 = 1 the coefficients close to
    // 1 / (n! (1 - 2^-2)(1 - 2^-3)...(1 - 2^-n)).
    let c1 = phi.coeff(1);
    println!("\nclosed form check (c_1 = 1 normalization):");
    println!(
        "  c_2 / c_1 = {:.15} (2/3 = {:.15})",
        phi.coeff(2) / c1,
        2.0 / 3.0
    );
    println!(
        "  c_3 / c_1 = {:.15} (16/63 = {:.15})",
        phi.coeff(3) / c1,
        16.0 / 63.0
    );

    println!("\nphi on [0, 1]:");
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        println!("  phi({t:.1}) = {:.12}", phi.eval(t));
    }
    Ok(())
}
