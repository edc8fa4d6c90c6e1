//! End-to-end tests of the `spr-forge` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spr-forge"))
        .args(args)
        .env_remove("SPR_FORGE_TOL_FILE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_vec_pretty(v).unwrap()).unwrap();
}

#[test]
fn check_hurwitz_verdicts_and_exit_codes() {
    let yes = bin(&["check-hurwitz", "1,3,3,1"]);
    assert_eq!(yes.status.code(), Some(0));
    let doc = json_of(&yes);
    assert_eq!(doc["schema"], "spr-forge/1");
    assert_eq!(doc["verdict"], true);
    assert_eq!(doc["coefficient_order"], "descending");

    let no = bin(&["check-hurwitz", "1,0,-1"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json_of(&no)["verdict"], false);
}

#[test]
fn malformed_input_is_exit_two() {
    let out = bin(&["check-hurwitz", "1,abc,3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["check-spr", "1", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json_of(&out)["error"]["kind"].is_string());
    let out = bin(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unstable_segment_is_refused_with_witness() {
    let out = bin(&["check-segment", "1,1,2.75,1.25,1.75", "1,1,1.25,0.75,0.25"]);
    assert_eq!(out.status.code(), Some(1));
    let seg = &json_of(&out)["result"]["segment"];
    let lambda = seg["witness_lambda"].as_f64().unwrap();
    assert!((lambda - 0.5).abs() < 1e-6, "{lambda}");

    let out = bin(&["synthesize", "1,1,2.75,1.25,1.75", "1,1,1.25,0.75,0.25"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["verdict"], false);
}

#[test]
fn check_schur_and_spr() {
    assert_eq!(bin(&["check-schur", "1,-0.5"]).status.code(), Some(0));
    assert_eq!(bin(&["check-schur", "1,-2"]).status.code(), Some(1));
    assert_eq!(bin(&["check-spr", "1,2", "1,1"]).status.code(), Some(0));
    assert_eq!(bin(&["check-spr", "1,-1", "1,1"]).status.code(), Some(1));
}

#[test]
fn synthesize_then_certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("result.json");
    let out = bin(&["-o", result.to_str().unwrap(), "synthesize", "1,3,3,1", "1,6,12,8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = bin(&["certify", result.to_str().unwrap(), "--samples", "20001"]);
    assert_eq!(cert.status.code(), Some(0));
    let doc = json_of(&cert);
    assert_eq!(doc["result"]["all_passed"], true);

    // Tampering with the numerator must be caught by the oracles.
    let mut doc: Value = serde_json::from_slice(&std::fs::read(&result).unwrap()).unwrap();
    doc["result"]["c_final"] = json!([1.0, -5.0, 1.0, 1.0]);
    write(&result, &doc);
    let cert = bin(&["certify", result.to_str().unwrap(), "--samples", "20001"]);
    assert_eq!(cert.status.code(), Some(1));
    assert_eq!(json_of(&cert)["result"]["all_passed"], false);
}

#[test]
fn discrete_synthesis_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("d.json");
    let out = bin(&["-o", result.to_str().unwrap(), "synthesize-discrete", "1,0,0", "1,-0.5,0.06"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = bin(&["certify", result.to_str().unwrap()]);
    assert_eq!(cert.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let a = bin(&["synthesize", "1,3,3,1", "1,6,12,8"]);
    let b = bin(&["synthesize", "1,3,3,1", "1,6,12,8"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_emits_csv() {
    let out = bin(&["sweep", "1,2", "1,1", "--omega-max", "10", "--samples", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega,re_f,im_f");
    assert_eq!(lines.len(), 12);
    // f(0) = 2
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, 2.0, 0.0]);
}

#[test]
fn tolerance_layers_take_precedence_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let env_file = dir.path().join("env.json");
    let flag_file = dir.path().join("flag.json");
    write(&env_file, &json!({ "pos": 1e-7, "stab": 1e-7 }));
    write(&flag_file, &json!({ "stab": 1e-6 }));

    let out = Command::new(env!("CARGO_BIN_EXE_spr-forge"))
        .args(["--tol-file", flag_file.to_str().unwrap(), "--tol", "strip=1e-13", "check-hurwitz", "1,1"])
        .env("SPR_FORGE_TOL_FILE", &env_file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let tol = &json_of(&out)["tolerances"];
    assert_eq!(tol["pos"], 1e-7);
    assert_eq!(tol["stab"], 1e-6);
    assert_eq!(tol["strip"], 1e-13);

    let bad = bin(&["--tol", "bogus=1", "check-hurwitz", "1,1"]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = bin(&["--tol", "pos=-1", "check-hurwitz", "1,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn batch_runs_jobs_in_order_and_reports_worst_exit() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("job1.json");
    let jobs = dir.path().join("jobs.json");
    write(
        &jobs,
        &json!({
            "schema": "spr-forge/1",
            "jobs": [
                { "command": "check-hurwitz", "polynomials": { "p": "1,3,3,1" } },
                {
                    "command": "check-hurwitz",
                    "polynomials": { "p": { "order": "ascending", "coeffs": [-1, 0, 1] } },
                    "output": out_file.to_str().unwrap()
                },
                {
                    "command": "synthesize",
                    "polynomials": { "a": "1,3,3,1", "b": "1,6,12,8" },
                    "options": { "tolerances": { "pos": 1e-8 } }
                }
            ]
        }),
    );
    let out = bin(&["batch", jobs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    let reports = doc["results"].as_array().expect("results array");
    assert_eq!(reports.len(), 3);
    let codes: Vec<i64> = reports.iter().map(|r| r["exit_code"].as_i64().unwrap()).collect();
    assert_eq!(codes, vec![0, 1, 0]);
    assert_eq!(reports[2]["tolerances"]["pos"], 1e-8);
    let written: Value = serde_json::from_slice(&std::fs::read(&out_file).unwrap()).unwrap();
    assert_eq!(written["verdict"], false);
}

#[test]
fn batch_rejects_bare_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = dir.path().join("jobs.json");
    write(
        &jobs,
        &json!({ "schema": "spr-forge/1", "jobs": [ { "command": "check-hurwitz", "polynomials": { "p": [1, 1] } } ] }),
    );
    let out = bin(&["batch", jobs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
