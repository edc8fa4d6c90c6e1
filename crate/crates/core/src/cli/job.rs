//! Job specifications: the validated, serialisable form of one command.
//!
//! Command lines and batch files both turn into a [`JobSpec`]. Validation
//! resolves coefficient inputs, checks that exactly the polynomials the
//! command needs are present, and layers tolerance overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::Poly;

pub const SCHEMA: &str = "spr-forge/1";

/// Environment variable naming a JSON tolerance override file.
pub const TOL_FILE_ENV: &str = "SPR_FORGE_TOL_FILE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckHurwitz,
    CheckSchur,
    CheckSegment,
    CheckSpr,
    Synthesize,
    SynthesizeDiscrete,
    Certify,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckHurwitz => "check-hurwitz",
            Command::CheckSchur => "check-schur",
            Command::CheckSegment => "check-segment",
            Command::CheckSpr => "check-spr",
            Command::Synthesize => "synthesize",
            Command::SynthesizeDiscrete => "synthesize-discrete",
            Command::Certify => "certify",
            Command::Sweep => "sweep",
        }
    }

    /// Required and optional polynomial names.
    fn polynomial_names(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Command::CheckHurwitz | Command::CheckSchur => (&["p"], &[]),
            Command::CheckSegment | Command::SynthesizeDiscrete => (&["a", "b"], &[]),
            Command::Synthesize => (&["a", "b"], &["h"]),
            Command::CheckSpr | Command::Sweep => (&["num", "den"], &[]),
            Command::Certify => (&[], &[]),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    /// Field-by-field tolerance overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Cutting-plane rounds of the LP fallback search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// Maximum halvings of `ε` and `δ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halving_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
    /// Result document re-verified by `certify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

/// One command with its operands. Polynomials are given either as a
/// comma-separated string of descending coefficients, a path to a JSON
/// file, or an object `{"order": "descending", "coeffs": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub polynomials: BTreeMap<String, Value>,
    #[serde(default)]
    pub options: JobOptions,
    /// Also write this job's document to a file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// A batch file: `{"schema": "spr-forge/1", "jobs": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchSpec {
    pub schema: String,
    pub jobs: Vec<JobSpec>,
}

/// A job after validation.
#[derive(Clone, Debug)]
pub struct ValidatedJob {
    pub command: Command,
    pub polys: BTreeMap<String, Poly>,
    pub tol: Tolerances,
    pub options: JobOptions,
}

impl ValidatedJob {
    pub fn poly(&self, name: &str) -> &Poly {
        &self.polys[name]
    }
}

fn looks_like_file(text: &str) -> bool {
    text.ends_with(".json") || Path::new(text).is_file()
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| Error::Input(format!("malformed coefficient {tok:?} in {text:?}")))
        })
        .collect()
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn coefficients(name: &str, value: &Value) -> Result<Vec<f64>> {
    match value {
        Value::String(text) if looks_like_file(text) => coefficients(name, &read_json(Path::new(text))?),
        Value::String(text) => parse_list(text),
        Value::Object(obj) => {
            if let Some(extra) = obj.keys().find(|k| *k != "order" && *k != "coeffs") {
                return Err(Error::Input(format!("polynomial {name}: unknown field {extra:?}")));
            }
            let order = obj
                .get("order")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Input(format!("polynomial {name}: missing \"order\" marker")))?;
            let coeffs = obj
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Input(format!("polynomial {name}: missing \"coeffs\" array")))?;
            let mut out = coeffs
                .iter()
                .map(|c| c.as_f64().ok_or_else(|| Error::Input(format!("polynomial {name}: non-numeric {c}"))))
                .collect::<Result<Vec<f64>>>()?;
            match order {
                "descending" => {}
                "ascending" => out.reverse(),
                other => return Err(Error::Input(format!("polynomial {name}: unknown order {other:?}"))),
            }
            Ok(out)
        }
        Value::Array(_) => Err(Error::Input(format!(
            "polynomial {name}: bare arrays are ambiguous, use {{\"order\": \"descending\", \"coeffs\": [...]}}"
        ))),
        other => Err(Error::Input(format!("polynomial {name}: unexpected {other}"))),
    }
}

/// Resolves one coefficient input into a polynomial.
pub fn parse_poly(name: &str, value: &Value, tol: &Tolerances) -> Result<Poly> {
    let coeffs = coefficients(name, value)?;
    if coeffs.is_empty() {
        return Err(Error::Input(format!("polynomial {name}: no coefficients")));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Input(format!("polynomial {name}: non-finite coefficient")));
    }
    let p = Poly::normalized(&coeffs, tol.strip)?;
    if p.is_zero() {
        return Err(Error::Input(format!("polynomial {name} is identically zero")));
    }
    Ok(p)
}

/// Merges JSON tolerance layers over the defaults. Unknown names and
/// non-positive values are rejected.
pub fn layer_tolerances(base: Tolerances, layers: &[Map<String, Value>]) -> Result<Tolerances> {
    let mut merged = match serde_json::to_value(base) {
        Ok(Value::Object(m)) => m,
        _ => return Err(Error::Internal("tolerances do not serialise to an object".into())),
    };
    for layer in layers {
        for (k, v) in layer {
            if !merged.contains_key(k) {
                return Err(Error::Input(format!("unknown tolerance {k:?}")));
            }
            match v.as_f64() {
                Some(x) if x.is_finite() && x > 0.0 => {
                    merged.insert(k.clone(), v.clone());
                }
                _ => return Err(Error::Input(format!("tolerance {k} must be a positive number, got {v}"))),
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Input(e.to_string()))
}

/// Reads a tolerance file as one override layer.
pub fn tolerance_layer(path: &Path) -> Result<Map<String, Value>> {
    match read_json(path)? {
        Value::Object(m) => Ok(m),
        _ => Err(Error::Input(format!("{}: tolerance file must hold an object", path.display()))),
    }
}

impl JobSpec {
    pub fn validate(&self, base: Tolerances) -> Result<ValidatedJob> {
        let overrides: Map<String, Value> =
            self.options.tolerances.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect();
        let tol = layer_tolerances(base, &[overrides])?;
        let (required, optional) = self.command.polynomial_names();
        for name in self.polynomials.keys() {
            if !required.contains(&name.as_str()) && !optional.contains(&name.as_str()) {
                return Err(Error::Input(format!("{} takes no polynomial named {name:?}", self.command.name())));
            }
        }
        let mut polys = BTreeMap::new();
        for name in required {
            let v = self
                .polynomials
                .get(*name)
                .ok_or_else(|| Error::Input(format!("{} needs polynomial {name:?}", self.command.name())))?;
            polys.insert(name.to_string(), parse_poly(name, v, &tol)?);
        }
        for name in optional {
            if let Some(v) = self.polynomials.get(*name) {
                polys.insert(name.to_string(), parse_poly(name, v, &tol)?);
            }
        }
        let o = &self.options;
        if let Some(w) = o.omega_max {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Input(format!("omega-max must be positive, got {w}")));
            }
        }
        if o.samples == Some(0) || o.samples == Some(1) {
            return Err(Error::Input("samples must be at least 2".into()));
        }
        match self.command {
            Command::Sweep if o.omega_max.is_none() || o.samples.is_none() => {
                return Err(Error::Input("sweep needs omega-max and samples".into()));
            }
            Command::Certify if o.input.is_none() => {
                return Err(Error::Input("certify needs an input document".into()));
            }
            _ => {}
        }
        Ok(ValidatedJob { command: self.command, polys, tol, options: o.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn coefficient_forms() {
        let tol = Tolerances::default();
        assert_eq!(parse_poly("p", &json!("1, -3,2"), &tol).unwrap().coeffs(), &[1.0, -3.0, 2.0]);
        let asc = json!({"order": "ascending", "coeffs": [2, -3, 1]});
        assert_eq!(parse_poly("p", &asc, &tol).unwrap().coeffs(), &[1.0, -3.0, 2.0]);
        assert!(parse_poly("p", &json!([1, 2]), &tol).is_err());
        assert!(parse_poly("p", &json!({"coeffs": [1, 2]}), &tol).is_err());
        assert!(parse_poly("p", &json!("1,x"), &tol).is_err());
        assert!(parse_poly("p", &json!("0,0"), &tol).is_err());
        assert!(parse_poly("p", &json!("1,inf"), &tol).is_err());
    }

    #[test]
    fn tolerance_layers() {
        let mut m = Map::new();
        m.insert("pos".into(), json!(1e-6));
        let t = layer_tolerances(Tolerances::default(), &[m]).unwrap();
        assert_eq!(t.pos, 1e-6);
        assert_eq!(t.stab, Tolerances::default().stab);
        let mut bad = Map::new();
        bad.insert("nope".into(), json!(1.0));
        assert!(layer_tolerances(Tolerances::default(), &[bad]).is_err());
    }

    #[test]
    fn validation_checks_names() {
        let spec: JobSpec = serde_json::from_value(json!({
            "command": "check-spr",
            "polynomials": {"num": "1,1", "den": "1,2", "p": "1"}
        }))
        .unwrap();
        assert!(spec.validate(Tolerances::default()).is_err());
        let spec: JobSpec = serde_json::from_value(json!({"command": "sweep", "polynomials": {"num": "1", "den": "1,1"}}))
            .unwrap();
        assert!(spec.validate(Tolerances::default()).is_err());
    }
}
