//! Command-line front door.
//!
//! Every invocation is turned into a [`JobSpec`], validated, executed, and
//! reported as a versioned JSON document (`"schema": "spr-forge/1"`), or
//! as CSV for `sweep`. Exit codes: 0 affirmative verdict or success, 1
//! negative verdict, 2 input error, 3 internal fault or exhausted search.
//!
//! Tolerances are layered: defaults, then the file named by
//! `SPR_FORGE_TOL_FILE`, then `--tol-file`, then `--tol NAME=VALUE`, then
//! per-job overrides in batch files.

mod certify;
mod exec;
mod job;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub use certify::{certify_document, CertifyGrid, CertifyReport, OracleCheck, DEFAULT_OMEGA_MAX, DEFAULT_SAMPLES};
pub use exec::{
    error_kind, execute, exit_code, sweep_csv, sweep_grid, Body, Report, EXIT_FAULT, EXIT_INPUT, EXIT_NEGATIVE,
    EXIT_OK,
};
pub use job::{
    layer_tolerances, parse_poly, tolerance_layer, BatchSpec, Command, JobOptions, JobSpec, Spacing, ValidatedJob,
    SCHEMA, TOL_FILE_ENV,
};

use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "spr-forge", version, about = "Segment stability and robust SPR synthesis")]
struct Cli {
    /// Tolerance override, e.g. `--tol pos=1e-8` (repeatable).
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,
    /// JSON file of tolerance overrides.
    #[arg(long, value_name = "PATH", global = true)]
    tol_file: Option<PathBuf>,
    /// Write the document here instead of standard output.
    #[arg(long, short, value_name = "PATH", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Routh–Hurwitz test of one polynomial.
    CheckHurwitz {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Unit-disc test of one polynomial in z.
    CheckSchur {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Hurwitz test of every member of the segment between a and b.
    CheckSegment {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// SPR certificate for num/den.
    CheckSpr {
        #[arg(allow_hyphen_values = true)]
        num: String,
        #[arg(allow_hyphen_values = true)]
        den: String,
    },
    /// Robust SPR synthesis for the segment between a and b.
    Synthesize {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Monic degree-n lift polynomial (default (s+1)^n).
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        /// Cutting-plane rounds of the LP fallback search.
        #[arg(long)]
        budget: Option<usize>,
        /// Maximum halvings of the two perturbation sizes.
        #[arg(long)]
        halving_budget: Option<usize>,
    },
    /// Robust SPR synthesis for a segment of polynomials in z.
    SynthesizeDiscrete {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        halving_budget: Option<usize>,
    },
    /// Re-verify a synthesis document with the brute-force oracles only.
    Certify {
        input: PathBuf,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// CSV of omega, Re f(jω), Im f(jω) for f = num/den.
    Sweep {
        #[arg(allow_hyphen_values = true)]
        num: String,
        #[arg(allow_hyphen_values = true)]
        den: String,
        #[arg(long)]
        omega_max: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
    },
    /// Run a batch file of jobs in parallel; results keep input order.
    Batch { jobs: PathBuf },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn polys(pairs: &[(&str, &String)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), Value::String((*v).clone()))).collect()
}

fn job_from(sub: Sub) -> std::result::Result<JobSpec, PathBuf> {
    let (command, polynomials, options) = match sub {
        Sub::CheckHurwitz { p } => (Command::CheckHurwitz, polys(&[("p", &p)]), JobOptions::default()),
        Sub::CheckSchur { p } => (Command::CheckSchur, polys(&[("p", &p)]), JobOptions::default()),
        Sub::CheckSegment { a, b } => (Command::CheckSegment, polys(&[("a", &a), ("b", &b)]), JobOptions::default()),
        Sub::CheckSpr { num, den } => (Command::CheckSpr, polys(&[("num", &num), ("den", &den)]), JobOptions::default()),
        Sub::Synthesize { a, b, h, budget, halving_budget } => {
            let mut p = polys(&[("a", &a), ("b", &b)]);
            if let Some(h) = h {
                p.insert("h".into(), Value::String(h));
            }
            (Command::Synthesize, p, JobOptions { budget, halving_budget, ..Default::default() })
        }
        Sub::SynthesizeDiscrete { a, b, budget, halving_budget } => (
            Command::SynthesizeDiscrete,
            polys(&[("a", &a), ("b", &b)]),
            JobOptions { budget, halving_budget, ..Default::default() },
        ),
        Sub::Certify { input, omega_max, samples } => (
            Command::Certify,
            BTreeMap::new(),
            JobOptions { input: Some(input), omega_max, samples, ..Default::default() },
        ),
        Sub::Sweep { num, den, omega_max, samples, spacing } => (
            Command::Sweep,
            polys(&[("num", &num), ("den", &den)]),
            JobOptions { omega_max: Some(omega_max), samples: Some(samples), spacing: Some(spacing), ..Default::default() },
        ),
        Sub::Batch { jobs } => return Err(jobs),
    };
    Ok(JobSpec { command, polynomials, options, output: None })
}

fn base_tolerances(env_file: Option<&Path>, tol_file: Option<&Path>, pairs: &[String]) -> Result<Tolerances> {
    let mut layers = Vec::new();
    for path in [env_file, tol_file].into_iter().flatten() {
        layers.push(tolerance_layer(path)?);
    }
    let mut cli = Map::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("--tol expects NAME=VALUE, got {pair:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Input(format!("--tol {k}: malformed value {v:?}")))?;
        cli.insert(k.trim().to_string(), json!(v));
    }
    layers.push(cli);
    layer_tolerances(Tolerances::default(), &layers)
}

fn run_job(spec: &JobSpec, base: Tolerances) -> Report {
    match spec.validate(base) {
        Ok(job) => execute(&job),
        Err(e) => Report::failure(spec.command.name(), base, &e),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn run_batch(path: &Path, base: Tolerances) -> Result<(i32, Value)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let batch: BatchSpec =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    if batch.schema != SCHEMA {
        return Err(Error::Input(format!("expected schema {SCHEMA:?}, found {:?}", batch.schema)));
    }
    let reports: Vec<Report> = batch
        .jobs
        .par_iter()
        .map(|spec| {
            let report = run_job(spec, base);
            match &spec.output {
                Some(out) => match write_file(out, &report.render()) {
                    Ok(()) => report,
                    Err(e) => Report::failure(spec.command.name(), report.tol, &e),
                },
                None => report,
            }
        })
        .collect();
    let code = reports.iter().map(|r| r.code).max().unwrap_or(EXIT_OK);
    let results: Vec<Value> = reports.iter().map(Report::document).collect();
    Ok((
        code,
        json!({
            "schema": SCHEMA,
            "command": "batch",
            "exit_code": code,
            "tolerances": base,
            "results": results,
        }),
    ))
}

fn failure_doc(command: &str, tol: Tolerances, e: &Error) -> (i32, String) {
    let r = Report::failure(command, tol, e);
    (r.code, r.render())
}

/// Runs the CLI with an explicit value for the tolerance-file variable.
pub fn run_with<I, T>(argv: I, env_tol_file: Option<PathBuf>) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CliOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => CliOutput { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    let output = cli.output.clone();
    let (code, text) = match base_tolerances(env_tol_file.as_deref(), cli.tol_file.as_deref(), &cli.tol) {
        Err(e) => failure_doc("tolerances", Tolerances::default(), &e),
        Ok(base) => match job_from(cli.command) {
            Ok(spec) => {
                let r = run_job(&spec, base);
                (r.code, r.render())
            }
            Err(path) => match run_batch(&path, base) {
                Ok((code, doc)) => (code, exec::pretty(&doc)),
                Err(e) => failure_doc("batch", base, &e),
            },
        },
    };
    let stderr = if code == EXIT_INPUT || code == EXIT_FAULT {
        serde_json::from_str::<Value>(&text)
            .ok()
            .and_then(|v| v.pointer("/error/message").and_then(Value::as_str).map(|m| format!("error: {m}\n")))
            .unwrap_or_default()
    } else {
        String::new()
    };
    match output {
        Some(path) => match write_file(&path, &text) {
            Ok(()) => CliOutput { code, stdout: String::new(), stderr },
            Err(e) => CliOutput { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        None => CliOutput { code, stdout: text, stderr },
    }
}

/// Runs the CLI, reading `SPR_FORGE_TOL_FILE` from the environment.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_file = std::env::var_os(TOL_FILE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    run_with(argv, env_file)
}
