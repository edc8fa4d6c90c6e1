//! Re-verification of synthesis documents using only the brute-force
//! oracles: companion-matrix roots along a λ grid, dense frequency grids,
//! and the Schur–Cohn reduction. Nothing from the certificate machinery
//! (Routh tables, Sturm chains) is consulted.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::job::SCHEMA;
use crate::discrete::DiscreteSynthesisResult;
use crate::error::{Error, Result};
use crate::oracles::{
    grid_min_real_part, lambda_grid_roots, max_real_part, schur_cohn_stable, unit_circle_min_real_part,
};
use crate::polycore::Poly;
use crate::segstab::SegmentFamily;
use crate::synthesis::SynthesisResult;

pub const DEFAULT_OMEGA_MAX: f64 = 1e6;
pub const DEFAULT_SAMPLES: usize = 100_001;
const LAMBDA_SAMPLES: usize = 1001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    /// The sampled quantity behind the check, when there is one.
    pub value: Option<f64>,
    pub detail: String,
}

impl OracleCheck {
    fn new(name: &str, passed: bool, value: Option<f64>, detail: impl Into<String>) -> Self {
        OracleCheck { name: name.into(), passed, value, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub source_command: String,
    pub checks: Vec<OracleCheck>,
    pub all_passed: bool,
}

/// Grid parameters of the frequency sweeps.
#[derive(Clone, Copy, Debug)]
pub struct CertifyGrid {
    pub omega_max: f64,
    pub samples: usize,
}

impl Default for CertifyGrid {
    fn default() -> Self {
        CertifyGrid { omega_max: DEFAULT_OMEGA_MAX, samples: DEFAULT_SAMPLES }
    }
}

fn negative_real_parts(name: &str, p: &Poly) -> OracleCheck {
    match max_real_part(p) {
        Ok(r) => OracleCheck::new(name, r < 0.0, Some(r), "largest root real part"),
        Err(e) => OracleCheck::new(name, false, None, e.to_string()),
    }
}

fn positive_grid(name: &str, report: Result<crate::oracles::GridReport>) -> OracleCheck {
    match report {
        Ok(r) => OracleCheck::new(
            name,
            r.min_value > 0.0,
            Some(r.min_value),
            format!("grid minimum at {} over {} samples", r.argmin, r.samples),
        ),
        Err(e) => OracleCheck::new(name, false, None, e.to_string()),
    }
}

fn continuous_checks(r: &SynthesisResult, grid: CertifyGrid) -> Vec<OracleCheck> {
    let (a, b, c) = (r.family.a(), r.family.b(), &r.c_final);
    let mut checks = Vec::new();
    let fam = match SegmentFamily::new(a.clone(), b.clone()) {
        Ok(f) => {
            checks.push(OracleCheck::new("family", true, None, "monic endpoints of equal degree"));
            f
        }
        Err(e) => {
            checks.push(OracleCheck::new("family", false, None, e.to_string()));
            return checks;
        }
    };
    let n = fam.degree();
    checks.push(OracleCheck::new(
        "numerator_degree",
        !c.is_zero() && c.degree() == n && c.leading() > 0.0,
        None,
        format!("c_final has degree {} against {n}", c.degree()),
    ));
    checks.push(match lambda_grid_roots(&fam, LAMBDA_SAMPLES) {
        Ok(g) => OracleCheck::new(
            "segment_roots",
            g.max_real_part < 0.0,
            Some(g.max_real_part),
            format!("largest root real part over {LAMBDA_SAMPLES} λ samples, at λ = {}", g.at_lambda),
        ),
        Err(e) => OracleCheck::new("segment_roots", false, None, e.to_string()),
    });
    checks.push(negative_real_parts("numerator_roots", c));
    checks.push(positive_grid("re_positive_a", grid_min_real_part(c, a, grid.omega_max, grid.samples)));
    checks.push(positive_grid("re_positive_b", grid_min_real_part(c, b, grid.omega_max, grid.samples)));
    checks
}

fn discrete_checks(r: &DiscreteSynthesisResult, grid: CertifyGrid) -> Vec<OracleCheck> {
    let (az, bz, c) = (&r.az, &r.bz, &r.c_z);
    let mut checks = Vec::new();
    if az.is_zero() || bz.is_zero() || az.degree() != bz.degree() || c.is_zero() {
        checks.push(OracleCheck::new("family", false, None, "endpoints must be nonzero of equal degree"));
        return checks;
    }
    let n = az.degree();
    checks.push(OracleCheck::new("family", true, None, "endpoints of equal degree"));
    checks.push(OracleCheck::new(
        "numerator_degree",
        c.degree() <= n,
        None,
        format!("c_z has degree {} against {n}", c.degree()),
    ));
    let mut unstable_at = None;
    for k in 0..LAMBDA_SAMPLES {
        let l = k as f64 / (LAMBDA_SAMPLES - 1) as f64;
        let p = az + &(bz - az).scale(l);
        if !schur_cohn_stable(&p).unwrap_or(false) {
            unstable_at = Some(l);
            break;
        }
    }
    checks.push(OracleCheck::new(
        "segment_schur",
        unstable_at.is_none(),
        unstable_at,
        format!("Schur–Cohn over {LAMBDA_SAMPLES} λ samples"),
    ));
    checks.push(positive_grid("re_positive_a", unit_circle_min_real_part(c, az, grid.samples)));
    checks.push(positive_grid("re_positive_b", unit_circle_min_real_part(c, bz, grid.samples)));
    checks
}

/// Checks a `synthesize` or `synthesize-discrete` document.
pub fn certify_document(doc: &Value, grid: CertifyGrid) -> Result<CertifyReport> {
    let schema = doc.get("schema").and_then(Value::as_str);
    if schema != Some(SCHEMA) {
        return Err(Error::Input(format!("expected schema {SCHEMA:?}, found {schema:?}")));
    }
    let command = doc
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Input("document has no command".into()))?;
    let result = doc
        .get("result")
        .filter(|_| doc.get("exit_code").and_then(Value::as_i64) == Some(0))
        .ok_or_else(|| Error::Input("document does not hold a successful result".into()))?;
    let parse_err = |e: serde_json::Error| Error::Input(format!("malformed {command} result: {e}"));
    let checks = match command {
        "synthesize" => continuous_checks(&serde_json::from_value(result.clone()).map_err(parse_err)?, grid),
        "synthesize-discrete" => discrete_checks(&serde_json::from_value(result.clone()).map_err(parse_err)?, grid),
        other => return Err(Error::Input(format!("cannot certify a {other:?} document"))),
    };
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(CertifyReport { source_command: command.into(), checks, all_passed })
}
