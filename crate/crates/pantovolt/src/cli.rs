//! Problem-file parsing, command dispatch, and report emission.
//!
//! Problem definitions are JSON documents; reports are JSON on stdout and
//! sampled functions are CSV files. Identical inputs produce byte-identical
//! reports: every report is a plain struct with a fixed field order and the
//! whole pipeline is deterministic.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_point::eigenfunction_by_iteration;
use crate::grid::uniform_nodes;
use crate::operator::{residual, SolutionRep};
use crate::problem::{BivariateKernel, ProblemSpec, SolverOptions};
use crate::series::{LogPowerSeries, PowerSeries};
use crate::series_solver::{general_solution, homogeneous_series, SeriesSolution};
use crate::spectrum::{check_conditions, eigenvalue, eigenvalues, estimate_contraction};

/// How an eigenfunction is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Undetermined coefficients (truncated series).
    Series,
    /// Fixed-point iteration in the weighted norm.
    Iterate,
    /// Both, with a pointwise comparison.
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Iterate => "iterate",
            Method::Both => "both",
        }
    }
}

/// The CLI surface: each variant is one subcommand.
#[derive(Debug, Clone, clap::Subcommand)]
pub enum Command {
    /// Verify the eigenvalue hypotheses and estimate the contraction weight.
    Check {
        /// Hoelder exponent in (0,1); defaults to the problem options.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// List the leading eigenvalues a(0) alpha^n.
    Spectrum {
        /// How many eigenvalues to report.
        #[arg(long)]
        count: usize,
    },
    /// Construct the eigenfunction for index n.
    Eigenfunction {
        /// Eigenvalue index n >= 0.
        #[arg(long)]
        n: usize,
        /// Construction method.
        #[arg(long, value_enum, default_value_t = Method::Series)]
        method: Method,
        /// Series truncation order override.
        #[arg(long)]
        order: Option<usize>,
        /// Write sampled values to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the inhomogeneous equation at a spectral parameter.
    Solve {
        /// Spectral parameter lambda.
        #[arg(long)]
        lambda: f64,
        /// Free constant on the homogeneous part.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        /// Series truncation order override.
        #[arg(long)]
        order: Option<usize>,
        /// Write sampled values to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual of a stored solution, by quadrature substitution.
    Residual {
        /// Spectral parameter lambda.
        #[arg(long)]
        lambda: f64,
        /// Solution file as emitted by `solve`.
        #[arg(long)]
        solution: PathBuf,
    },
}

/// On-disk problem document.
#[derive(Debug, Serialize, Deserialize)]
struct ProblemFile {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<Vec<f64>>,
    #[serde(default)]
    kernel: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    f: Option<Vec<f64>>,
    #[serde(rename = "T", default)]
    radius: Option<f64>,
    #[serde(default)]
    options: Option<SolverOptions>,
}

/// Parses a problem file. `alpha` is required and must lie in (0,1); the
/// coefficient arrays default to zero functions and `T` to 1.
pub fn parse_problem(path: &Path) -> Result<ProblemSpec> {
    let text = fs::read_to_string(path)?;
    parse_problem_str(&text)
}

/// Parses a problem document from a string (see [`parse_problem`]).
pub fn parse_problem_str(text: &str) -> Result<ProblemSpec> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let alpha = file
        .alpha
        .ok_or_else(|| Error::Problem("missing required field alpha".into()))?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Problem("alpha must lie in (0,1)".into()));
    }
    let radius = file.radius.unwrap_or(1.0);
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Problem("T must be positive".into()));
    }
    let a = PowerSeries::new(file.a.unwrap_or_default())?;
    let f = PowerSeries::new(file.f.unwrap_or_default())?;
    let kernel = BivariateKernel::new(file.kernel.unwrap_or_default())?;
    let spec = ProblemSpec::new(alpha, a, kernel, f, radius)?;
    Ok(spec.with_options(file.options.unwrap_or_default()))
}

/// Serializes a problem back to the file format; `parse_problem` reproduces
/// the spec field-for-field.
pub fn emit_problem(spec: &ProblemSpec) -> String {
    let file = ProblemFile {
        alpha: Some(spec.alpha),
        a: Some(spec.a.coeffs().to_vec()),
        kernel: Some(spec.kernel.rows().to_vec()),
        f: Some(spec.f.coeffs().to_vec()),
        radius: Some(spec.radius),
        options: Some(spec.options.clone()),
    };
    serde_json::to_string_pretty(&file).expect("problem files always serialize")
}

#[derive(Serialize)]
struct CheckReport<'a> {
    conditions: &'a crate::spectrum::ConditionReport,
    contraction: Option<&'a crate::spectrum::ContractionEstimate>,
}

#[derive(Serialize)]
struct IterateSummary {
    epsilon: f64,
    weight: f64,
    q_of_l: f64,
    iterations: usize,
    converged: bool,
    ratio: f64,
    grid: usize,
}

#[derive(Serialize)]
struct EigenfunctionReport {
    n: usize,
    lambda: f64,
    method: &'static str,
    order: Option<usize>,
    coefficients: Option<Vec<f64>>,
    iterate: Option<IterateSummary>,
    max_abs_diff: Option<f64>,
    csv: Option<String>,
}

/// Solution document: `solve` emits it and `residual --solution` reads it
/// back (extra keys such as `csv` are ignored on input).
#[derive(Debug, Serialize, Deserialize)]
struct SolutionFile {
    lambda: f64,
    free_constant: f64,
    resonant_order: Option<usize>,
    particular_p: Vec<f64>,
    particular_q: Vec<f64>,
    homogeneous: Vec<f64>,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    #[serde(flatten)]
    solution: &'a SolutionFile,
    csv: Option<String>,
}

#[derive(Serialize)]
struct ResidualJson {
    lambda: f64,
    domain: [f64; 2],
    sup_norm: f64,
    l2_norm: f64,
    samples: Vec<(f64, f64)>,
}

/// Executes one command against a parsed problem, writing the JSON report to
/// `out`. Solver errors propagate; the binary maps them to nonzero exit
/// codes.
pub fn run<W: Write>(command: &Command, spec: &ProblemSpec, out: &mut W) -> Result<()> {
    match command {
        Command::Check { epsilon } => {
            let eps = epsilon.unwrap_or(spec.options.epsilon);
            let conditions = check_conditions(spec, eps)?;
            let contraction = if conditions.holds {
                Some(estimate_contraction(spec, 0, eps, &conditions)?)
            } else {
                None
            };
            emit_json(
                out,
                &CheckReport {
                    conditions: &conditions,
                    contraction: contraction.as_ref(),
                },
            )
        }
        Command::Spectrum { count } => {
            let report = eigenvalues(spec, *count)?;
            emit_json(out, &report)
        }
        Command::Eigenfunction {
            n,
            method,
            order,
            out: csv_path,
        } => {
            let mut spec = spec.clone();
            if let Some(order) = order {
                spec.options.order = *order;
            }
            run_eigenfunction(&spec, *n, *method, order.as_ref(), csv_path.as_deref(), out)
        }
        Command::Solve {
            lambda,
            c,
            order,
            out: csv_path,
        } => {
            let mut spec = spec.clone();
            if let Some(order) = order {
                spec.options.order = *order;
            }
            let order = spec.options.order;
            let solution = general_solution(&spec, *lambda, *c, order)?;
            let file = solution_to_file(&solution);
            let csv = match csv_path {
                Some(path) => Some(write_solution_csv(&spec, &solution, path)?),
                None => None,
            };
            emit_json(
                out,
                &SolveReport {
                    solution: &file,
                    csv,
                },
            )
        }
        Command::Residual { lambda, solution } => {
            let text = fs::read_to_string(solution)?;
            let file: SolutionFile = serde_json::from_str(&text)?;
            let full = solution_from_file(&file)?.full();
            let domain = if full.is_log_free() {
                (0.0, spec.radius)
            } else {
                (spec.options.min_t, spec.radius)
            };
            let report = residual(spec, *lambda, &SolutionRep::LogSeries(&full), domain)?;
            emit_json(
                out,
                &ResidualJson {
                    lambda: *lambda,
                    domain: [report.domain.0, report.domain.1],
                    sup_norm: report.sup_norm,
                    l2_norm: report.l2_norm,
                    samples: report.samples,
                },
            )
        }
    }
}

fn run_eigenfunction<W: Write>(
    spec: &ProblemSpec,
    n: usize,
    method: Method,
    order: Option<&usize>,
    csv_path: Option<&Path>,
    out: &mut W,
) -> Result<()> {
    let lambda = eigenvalue(spec, n)?;
    let series = match method {
        Method::Series | Method::Both => Some(homogeneous_series(spec, n, spec.options.order)?),
        Method::Iterate => None,
    };
    let iterated = match method {
        Method::Iterate | Method::Both => Some(eigenfunction_by_iteration(spec, n)?),
        Method::Series => None,
    };

    let mut max_abs_diff = None;
    let csv = match csv_path {
        Some(path) => {
            let name = path.display().to_string();
            match (&series, &iterated) {
                (Some(series), None) => {
                    let ts = uniform_nodes(0.0, spec.radius, spec.options.eval_grid.max(2));
                    write_csv(
                        path,
                        &["t", "phi"],
                        ts.iter().map(|&t| vec![t, series.eval(t)]),
                    )?;
                }
                (None, Some(run)) => {
                    write_csv(
                        path,
                        &["t", "phi"],
                        run.phi
                            .nodes()
                            .iter()
                            .zip(run.phi.values())
                            .map(|(&t, &v)| vec![t, v]),
                    )?;
                }
                (Some(series), Some(run)) => {
                    let mut worst = 0.0f64;
                    let rows: Vec<Vec<f64>> = run
                        .phi
                        .nodes()
                        .iter()
                        .zip(run.phi.values())
                        .map(|(&t, &v)| {
                            let s = series.eval(t);
                            worst = worst.max((s - v).abs());
                            vec![t, s, v, (s - v).abs()]
                        })
                        .collect();
                    write_csv(
                        path,
                        &["t", "phi_series", "phi_iterate", "abs_diff"],
                        rows.into_iter(),
                    )?;
                    max_abs_diff = Some(worst);
                }
                (None, None) => unreachable!("method always selects a construction"),
            }
            Some(name)
        }
        None => {
            if let (Some(series), Some(run)) = (&series, &iterated) {
                let mut worst = 0.0f64;
                for (&t, &v) in run.phi.nodes().iter().zip(run.phi.values()) {
                    worst = worst.max((series.eval(t) - v).abs());
                }
                max_abs_diff = Some(worst);
            }
            None
        }
    };

    let report = EigenfunctionReport {
        n,
        lambda,
        method: method.name(),
        order: order.copied().or(match method {
            Method::Iterate => None,
            _ => Some(spec.options.order),
        }),
        coefficients: series.as_ref().map(|s| s.coeffs().to_vec()),
        iterate: iterated.as_ref().map(|run| IterateSummary {
            epsilon: spec.options.epsilon,
            weight: run.estimate.l_star,
            q_of_l: run.estimate.q_of_l,
            iterations: run.trace.iterations,
            converged: run.trace.converged,
            ratio: run.trace.ratio,
            grid: run.phi.len(),
        }),
        max_abs_diff,
        csv,
    };
    emit_json(out, &report)
}

fn solution_to_file(solution: &SeriesSolution) -> SolutionFile {
    SolutionFile {
        lambda: solution.lambda,
        free_constant: solution.free_constant,
        resonant_order: solution.resonant_order,
        particular_p: solution.particular.p().coeffs().to_vec(),
        particular_q: solution.particular.q().coeffs().to_vec(),
        homogeneous: solution.homogeneous.coeffs().to_vec(),
    }
}

fn solution_from_file(file: &SolutionFile) -> Result<SeriesSolution> {
    // Hand-edited files may carry ragged arrays; align everything to one
    // truncation order instead of bailing out.
    let p = PowerSeries::new(file.particular_p.clone())?;
    let q = PowerSeries::new(file.particular_q.clone())?;
    let homogeneous = PowerSeries::new(file.homogeneous.clone())?;
    let order = p.order().max(q.order()).max(homogeneous.order());
    Ok(SeriesSolution {
        lambda: file.lambda,
        particular: LogPowerSeries::new(p.with_order(order), q.with_order(order))?,
        homogeneous: homogeneous.with_order(order),
        free_constant: file.free_constant,
        resonant_order: file.resonant_order,
    })
}

fn write_solution_csv(
    spec: &ProblemSpec,
    solution: &SeriesSolution,
    path: &Path,
) -> Result<String> {
    let full = solution.full();
    let lo = if full.is_log_free() {
        0.0
    } else {
        spec.options.min_t
    };
    let ts = uniform_nodes(lo, spec.radius, spec.options.eval_grid.max(2));
    let rows: Result<Vec<Vec<f64>>> = ts
        .iter()
        .map(|&t| {
            let x = if full.is_log_free() {
                full.p().eval(t)
            } else {
                full.eval(t)?
            };
            Ok(vec![t, x])
        })
        .collect();
    write_csv(path, &["t", "x"], rows?.into_iter())?;
    Ok(path.display().to_string())
}

fn emit_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// CSV with a header row; numbers carry 17 significant digits so parsing
/// them back is lossless.
fn write_csv<I: Iterator<Item = Vec<f64>>>(path: &Path, header: &[&str], rows: I) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}
