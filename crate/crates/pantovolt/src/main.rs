use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use pantovolt::cli::{parse_problem, run, Command};

/// Solver CLI for integral-functional Volterra operators with a
/// proportionally contracted argument.
#[derive(Parser)]
#[command(name = "pantovolt", version, about)]
struct Cli {
    /// Problem definition file (JSON).
    #[arg(long, global = true)]
    problem: Option<PathBuf>,

    /// Override the solver grid size.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Override the fixed-point tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Override the lower sampling cutoff for log-singular solutions.
    #[arg(long = "min-t", global = true)]
    min_t: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = cli.problem else {
        eprintln!("error: --problem FILE is required");
        return ExitCode::from(2);
    };
    let mut spec = match parse_problem(&path) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::FAILURE;
        }
    };
    if let Some(grid) = cli.grid {
        spec.options.grid = grid;
    }
    if let Some(tol) = cli.tol {
        spec.options.tol = tol;
    }
    if let Some(min_t) = cli.min_t {
        spec.options.min_t = min_t;
    }

    let mut stdout = std::io::stdout().lock();
    match run(&cli.command, &spec, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
