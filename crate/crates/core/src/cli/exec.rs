//! Dispatch of validated jobs and the versioned output document.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::certify::{certify_document, CertifyGrid};
use super::job::{Command, Spacing, ValidatedJob, SCHEMA};
use crate::config::Tolerances;
use crate::discrete::{bilinear_to_continuous, synthesize_discrete};
use crate::error::{Error, Result};
use crate::polycore::{routh_hurwitz, Poly};
use crate::segstab::{segment_hurwitz, SegmentFamily};
use crate::sprcheck::is_spr;
use crate::synthesis::{synthesize, SynthesisConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAULT: i32 = 3;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SegmentUnstable { .. } => EXIT_NEGATIVE,
        Error::SearchExhausted { .. }
        | Error::Internal(_)
        | Error::NoConvergence(_)
        | Error::ConsistencyAlarm(_)
        | Error::LpInfeasible(_)
        | Error::DegenerateConic(_) => EXIT_FAULT,
        _ => EXIT_INPUT,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ZeroPolynomial => "zero_polynomial",
        Error::NonFinite => "non_finite",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::DegreeMismatch(_) => "degree_mismatch",
        Error::NotMonic(_) => "not_monic",
        Error::NotHurwitz(_) => "not_hurwitz",
        Error::Precondition(_) => "precondition",
        Error::DegenerateConic(_) => "degenerate_conic",
        Error::TransformPole => "transform_pole",
        Error::ConsistencyAlarm(_) => "consistency_alarm",
        Error::NoConvergence(_) => "no_convergence",
        Error::AxisPole(_) => "axis_pole",
        Error::LpInfeasible(_) => "lp_infeasible",
        Error::DegreeCap { .. } => "degree_cap",
        Error::TangencySide(_) => "tangency_side",
        Error::SegmentUnstable { .. } => "segment_unstable",
        Error::SearchExhausted { .. } => "search_exhausted",
        Error::Input(_) => "input",
        Error::Internal(_) => "internal",
    }
}

/// What a job produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Json { verdict: Option<bool>, result: Value },
    Csv(String),
    Failed(String, String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub code: i32,
    pub tol: Tolerances,
    pub body: Body,
}

impl Report {
    pub fn failure(command: &str, tol: Tolerances, e: &Error) -> Self {
        Report {
            command: command.into(),
            code: exit_code(e),
            tol,
            body: Body::Failed(error_kind(e).into(), e.to_string()),
        }
    }

    /// The JSON document. Keys are emitted in sorted order and no clock
    /// values are included, so equal jobs give byte-identical output.
    pub fn document(&self) -> Value {
        let mut doc = json!({
            "schema": SCHEMA,
            "command": self.command,
            "exit_code": self.code,
            "coefficient_order": "descending",
            "tolerances": self.tol,
        });
        let obj = doc.as_object_mut().expect("object literal");
        match &self.body {
            Body::Json { verdict, result } => {
                obj.insert("verdict".into(), json!(verdict));
                obj.insert("result".into(), result.clone());
            }
            Body::Csv(csv) => {
                obj.insert("verdict".into(), Value::Null);
                obj.insert("result".into(), json!({ "columns": ["omega", "re_f", "im_f"], "csv": csv }));
            }
            Body::Failed(kind, message) => {
                obj.insert("verdict".into(), Value::Null);
                obj.insert("error".into(), json!({ "kind": kind, "message": message }));
            }
        }
        doc
    }

    /// Text for a standalone invocation: CSV for a sweep, otherwise
    /// pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        match &self.body {
            Body::Csv(csv) => csv.clone(),
            _ => pretty(&self.document()),
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialisation failed: {e}")))
}

fn verdict(flag: bool, result: Value) -> (i32, Body) {
    let code = if flag { EXIT_OK } else { EXIT_NEGATIVE };
    (code, Body::Json { verdict: Some(flag), result })
}

/// Sweep frequencies: `samples` points on `[0, W]`, either uniform or
/// log-spaced from `W * 1e-6`.
pub fn sweep_grid(omega_max: f64, samples: usize, spacing: Spacing) -> Vec<f64> {
    let last = (samples - 1) as f64;
    match spacing {
        Spacing::Linear => (0..samples).map(|k| omega_max * k as f64 / last).collect(),
        Spacing::Log => {
            let (l0, l1) = ((omega_max * 1e-6).ln(), omega_max.ln());
            let mut g: Vec<f64> = (0..samples).map(|k| (l0 + (l1 - l0) * k as f64 / last).exp()).collect();
            g[samples - 1] = omega_max;
            g
        }
    }
}

/// CSV with header `omega,re_f,im_f` for `f = num / den` on the axis.
pub fn sweep_csv(num: &Poly, den: &Poly, omega: &[f64]) -> Result<String> {
    let mut out = String::from("omega,re_f,im_f\n");
    for &w in omega {
        let d = den.eval_at_jomega(w);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::AxisPole(w));
        }
        let f = num.eval_at_jomega(w) / d;
        writeln!(out, "{w},{},{}", f.re, f.im).expect("writing to a String");
    }
    Ok(out)
}

fn synthesis_config(job: &ValidatedJob) -> SynthesisConfig {
    let mut config = SynthesisConfig { tol: job.tol, h: job.polys.get("h").cloned(), ..Default::default() };
    if let Some(b) = job.options.budget {
        config.lp_rounds = b;
    }
    if let Some(h) = job.options.halving_budget {
        config.halving_budget = h;
    }
    config
}

fn dispatch(job: &ValidatedJob) -> Result<(i32, Body)> {
    let tol = &job.tol;
    match job.command {
        Command::CheckHurwitz => {
            let p = job.poly("p");
            let table = routh_hurwitz(p, tol)?;
            Ok(verdict(table.hurwitz, json!({ "polynomial": p, "hurwitz": table.hurwitz, "routh": to_value(&table)? })))
        }
        Command::CheckSchur => {
            let p = job.poly("p");
            if p.degree() == 0 {
                return Err(Error::Input("check-schur needs degree >= 1".into()));
            }
            let image = bilinear_to_continuous(p, tol)?;
            let table = routh_hurwitz(&image, tol)?;
            Ok(verdict(
                table.hurwitz,
                json!({ "polynomial": p, "schur": table.hurwitz, "continuous_image": image, "routh": to_value(&table)? }),
            ))
        }
        Command::CheckSegment => {
            let fam = SegmentFamily::normalized(job.poly("a"), job.poly("b"))?;
            let v = segment_hurwitz(&fam, tol)?;
            Ok(verdict(v.stable, json!({ "family": to_value(&fam)?, "segment": to_value(&v)? })))
        }
        Command::CheckSpr => {
            let (num, den) = (job.poly("num"), job.poly("den"));
            let cert = is_spr(num, den, tol)?;
            Ok(verdict(
                cert.spr,
                json!({ "numerator": num, "denominator": den, "spr": cert.spr, "certificate": to_value(&cert)? }),
            ))
        }
        Command::Synthesize => {
            let fam = SegmentFamily::normalized(job.poly("a"), job.poly("b"))?;
            match synthesize(&fam, &synthesis_config(job)) {
                Ok(r) => Ok(verdict(true, to_value(&r)?)),
                Err(Error::SegmentUnstable { verdict: v }) => {
                    Ok(verdict(false, json!({ "family": to_value(&fam)?, "segment": to_value(&v)? })))
                }
                Err(e) => Err(e),
            }
        }
        Command::SynthesizeDiscrete => {
            let (az, bz) = (job.poly("a"), job.poly("b"));
            match synthesize_discrete(az, bz, &synthesis_config(job)) {
                Ok(r) => Ok(verdict(true, to_value(&r)?)),
                Err(Error::SegmentUnstable { verdict: v }) => {
                    Ok(verdict(false, json!({ "az": az, "bz": bz, "segment": to_value(&v)? })))
                }
                Err(e) => Err(e),
            }
        }
        Command::Certify => {
            let path = job.options.input.as_ref().expect("validated");
            let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let mut grid = CertifyGrid::default();
            if let Some(w) = job.options.omega_max {
                grid.omega_max = w;
            }
            if let Some(s) = job.options.samples {
                grid.samples = s;
            }
            let report = certify_document(&doc, grid)?;
            Ok(verdict(report.all_passed, to_value(&report)?))
        }
        Command::Sweep => {
            let (num, den) = (job.poly("num"), job.poly("den"));
            let o = &job.options;
            let grid = sweep_grid(o.omega_max.expect("validated"), o.samples.expect("validated"), o.spacing.unwrap_or_default());
            Ok((EXIT_OK, Body::Csv(sweep_csv(num, den, &grid)?)))
        }
    }
}

/// Runs one validated job. Library errors become failure reports.
pub fn execute(job: &ValidatedJob) -> Report {
    match dispatch(job) {
        Ok((code, body)) => Report { command: job.command.name().into(), code, tol: job.tol, body },
        Err(e) => Report::failure(job.command.name(), job.tol, &e),
    }
}
