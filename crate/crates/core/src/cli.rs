//! Command-line front end. `run` maps argv to an exit code: 0 on success,
//! 1 when a check, suite or reproduction target fails, 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::geometry::{angle, AngleReport};
use crate::inequality::{check, InequalityId, DEFAULT_TOL};
use crate::lab::repro::repro_remark_3_8;
use crate::lab::scan::{sharpness_scan_with, Parametrization, ScanOptions};
use crate::lab::suite::{run_property_suite, EnsembleSpec};
use crate::matrix::Matrix;
use crate::spectral::{abs_op, franca_abs_2x2, polar, polar_residuals, PolarResiduals};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hsangle", version, about = "Hilbert-Schmidt angles, moduli and norm inequalities for complex matrices")]
pub struct Cli {
    /// Relative tolerance for inequality checks
    #[arg(long, global = true, env = "HSANGLE_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    Factored,
    Entries,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inner product, norms and the operator angle of two matrices
    Angle { a: PathBuf, b: PathBuf },
    /// Absolute value |A| = (A*A)^(1/2)
    Abs {
        a: PathBuf,
        /// Use the closed form (2x2 only)
        #[arg(long)]
        franca: bool,
    },
    /// Polar decomposition with identity residuals
    Polar { a: PathBuf },
    /// Evaluate one registry inequality on a pair
    Check {
        #[arg(long)]
        id: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Randomized run of the inequality registry
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Inclusive dimension range, `lo..hi`
        #[arg(long, default_value = "1..8")]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to these ids (default: all)
        #[arg(long = "id", value_delimiter = ',')]
        ids: Vec<String>,
    },
    /// Evaluate the explicit sharpness witnesses
    Repro,
    /// Search for pairs maximizing a ratio form
    Scan {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start the first climb next to a known maximizer
        #[arg(long)]
        warm_start: bool,
        #[arg(long, value_enum, default_value_t = ParamArg::Factored)]
        parametrization: ParamArg,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: malformed matrix JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("invalid --dims `{0}`: expected `lo..hi` with 1 <= lo <= hi")]
    Dims(String),
    #[error("--tol must be a positive finite number, got {0}")]
    Tol(f64),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub fn read_matrix(path: &Path) -> Result<Matrix<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Parses `lo..hi`, `lo..=hi` or a single `n`; both ends inclusive.
pub fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Dims(s.to_owned());
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

#[derive(Serialize)]
struct AngleOutput {
    #[serde(flatten)]
    report: AngleReport<f64>,
    theta: f64,
}

#[derive(Serialize)]
struct AbsOutput {
    method: &'static str,
    abs: Matrix<f64>,
}

#[derive(Serialize)]
struct PolarOutput {
    u: Matrix<f64>,
    abs: Matrix<f64>,
    unitary: Matrix<f64>,
    residuals_partial_isometry: PolarResiduals<f64>,
    residuals_unitary: PolarResiduals<f64>,
}

#[derive(Serialize)]
struct VerifySummary {
    ids: usize,
    trials: usize,
    violations: usize,
    passed: bool,
}

/// Collects report lines, then renders them in the chosen format.
struct Sink {
    format: Format,
    lines: Vec<Value>,
}

impl Sink {
    fn push<S: Serialize>(&mut self, v: &S) -> Result<(), CliError> {
        let v = serde_json::to_value(v).map_err(|e| CliError::Write(io::Error::other(e)))?;
        self.lines.push(v);
        Ok(())
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.lines.iter().enumerate() {
            match self.format {
                Format::Json => {
                    out.push_str(&v.to_string());
                    out.push('\n');
                }
                Format::Text => {
                    if k > 0 {
                        out.push('\n');
                    }
                    render_text(&mut out, "", v);
                }
            }
        }
        out
    }
}

fn fmt_number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        format!("{:.16e}", n.as_f64().expect("f64"))
    } else {
        n.to_string()
    }
}

fn is_matrix(m: &serde_json::Map<String, Value>) -> bool {
    m.len() == 4 && ["rows", "cols", "re", "im"].iter().all(|k| m.contains_key(*k))
}

fn render_text(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(m) if is_matrix(m) => {
            out.push_str(&format!("{path} =\n"));
            let (re, im) = (&m["re"], &m["im"]);
            for (rr, ir) in re.as_array().into_iter().flatten().zip(im.as_array().into_iter().flatten()) {
                let cells: Vec<String> = rr
                    .as_array()
                    .into_iter()
                    .flatten()
                    .zip(ir.as_array().into_iter().flatten())
                    .map(|(a, b)| {
                        let f = |x: &Value| x.as_f64().unwrap_or(f64::NAN);
                        format!("{:.16e}{:+.16e}i", f(a), f(b))
                    })
                    .collect();
                out.push_str(&format!("  [{}]\n", cells.join(", ")));
            }
        }
        Value::Object(m) => {
            for (k, child) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                render_text(out, &p, child);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let cells: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{path} = [{}]\n", cells.join(", ")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                render_text(out, &format!("{path}[{i}]"), child);
            }
        }
        other => out.push_str(&format!("{path} = {}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) => fmt_number(n),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_id(s: &str) -> Result<InequalityId, CliError> {
    Ok(s.parse::<InequalityId>()?)
}

fn execute(cli: &Cli, sink: &mut Sink) -> Result<bool, CliError> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Tol(tol));
    }
    match &cli.command {
        Command::Angle { a, b } => {
            let (x, y) = (read_matrix(a)?, read_matrix(b)?);
            let report = angle(&x, &y)?;
            sink.push(&AngleOutput {
                theta: report.theta(),
                report,
            })?;
            Ok(true)
        }
        Command::Abs { a, franca } => {
            let x = read_matrix(a)?;
            let (method, abs) = if *franca {
                ("franca", franca_abs_2x2(&x)?)
            } else {
                ("jacobi", abs_op(&x)?)
            };
            sink.push(&AbsOutput { method, abs })?;
            Ok(true)
        }
        Command::Polar { a } => {
            let x = read_matrix(a)?;
            let parts = polar(&x)?;
            sink.push(&PolarOutput {
                residuals_partial_isometry: polar_residuals(&x, &parts.u, &parts.abs)?,
                residuals_unitary: polar_residuals(&x, &parts.unitary, &parts.abs)?,
                u: parts.u,
                abs: parts.abs,
                unitary: parts.unitary,
            })?;
            Ok(true)
        }
        Command::Check { id, a, b } => {
            let id = parse_id(id)?;
            let (x, y) = (read_matrix(a)?, read_matrix(b)?);
            let report = check(id, &x, &y, tol)?;
            sink.push(&report)?;
            Ok(report.holds)
        }
        Command::Verify {
            trials,
            dims,
            seed,
            ids,
        } => {
            let ids: Vec<InequalityId> = if ids.is_empty() {
                InequalityId::ALL.to_vec()
            } else {
                ids.iter().map(|s| parse_id(s)).collect::<Result<_, _>>()?
            };
            let specs = EnsembleSpec::standard(parse_dims(dims)?);
            let reports = run_property_suite(&ids, &specs, *trials, tol, *seed)?;
            for r in &reports {
                sink.push(r)?;
            }
            let violations = reports.iter().map(|r| r.violations).sum();
            sink.push(&VerifySummary {
                ids: reports.len(),
                trials: reports.iter().map(|r| r.trials).sum(),
                violations,
                passed: violations == 0,
            })?;
            Ok(violations == 0)
        }
        Command::Repro => {
            let report = repro_remark_3_8();
            sink.push(&report)?;
            Ok(report.all_ok)
        }
        Command::Scan {
            id,
            dim,
            iters,
            seed,
            warm_start,
            parametrization,
        } => {
            let id = parse_id(id)?;
            let options = ScanOptions {
                warm_start: *warm_start,
                parametrization: match parametrization {
                    ParamArg::Factored => Parametrization::Factored,
                    ParamArg::Entries => Parametrization::Entries,
                },
            };
            let result = sharpness_scan_with(id, *dim, *iters, *seed, options)?;
            sink.push(&result)?;
            // going above a proved constant means the numerics are broken
            Ok(!result.exceeds_target(1e-9))
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut sink = Sink {
        format: cli.format,
        lines: Vec::new(),
    };
    let outcome = execute(&cli, &mut sink).and_then(|ok| {
        let text = sink.render();
        match &cli.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(ok)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("hsangle: error: {e}");
            EXIT_BAD_INPUT
        }
    }
}
