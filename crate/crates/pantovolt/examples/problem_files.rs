//! Problem files and programmatic command dispatch.
//!
//! The `pantovolt` binary reads JSON problem definitions; the same parsing,
//! dispatch, and report emission is available as a library through
//! [`pantovolt::cli`]. This example round-trips a problem file and runs two
//! commands in process.
//!
//! Run with: `cargo run --example problem_files`

use pantovolt::cli::{emit_problem, parse_problem_str, run, Command};

fn main() -> pantovolt::Result<()> {
    // lambda x(t) = int_0^t x(s) ds + x(t/2) + 2 on [0, 1].
    let text = r#"{
        "alpha": 0.5,
        "a": [1],
        "kernel": [[1]],
        "f": [2],
        "T": 1.0,
        "options": { "order": 30, "grid": 512 }
    }"#;
    let spec = parse_problem_str(text)?;
    println!(
        "parsed problem: alpha = {}, T = {}, order = {}",
        spec.alpha, spec.radius, spec.options.order
    );

    // Emission reproduces the spec field-for-field.
    let emitted = emit_problem(&spec);
    assert_eq!(parse_problem_str(&emitted)?, spec);
    println!("round trip: parse(emit(spec)) == spec");

    println!("\n--- spectrum --count 4 ---");
    let mut stdout = std::io::stdout().lock();
    run(&Command::Spectrum { count: 4 }, &spec, &mut stdout)?;

    println!("--- check --epsilon 0.5 ---");
    run(&Command::Check { epsilon: Some(0.5) }, &spec, &mut stdout)?;
    Ok(())
}
