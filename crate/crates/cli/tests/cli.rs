//! Behavior tests for the CLI: exit codes, JSON schema conformance, CSV
//! format, and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chern-einstein-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Loads a schema with the shared definitions inlined.
fn compiled_schema(name: &str) -> JSONSchema {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    let text = fs::read_to_string(dir.join(name))
        .expect("schema file")
        .replace("common.defs.json#", "#");
    let mut schema: Value = serde_json::from_str(&text).unwrap();
    let defs: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("common.defs.json")).unwrap()).unwrap();
    schema["definitions"] = defs["definitions"].clone();
    // The relative $id (a valid URI-reference) has no base here; the
    // validator wants an absolute one, and inlining made it unnecessary.
    schema.as_object_mut().unwrap().remove("$id");
    JSONSchema::options()
        .with_draft(Draft::Draft7)
        .compile(&schema)
        .expect("schema compiles")
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let schema = compiled_schema(schema_name);
    if !schema.is_valid(instance) {
        let msgs: Vec<String> = match schema.validate(instance) {
            Err(errors) => errors
                .map(|e| format!("{e} at {}", e.instance_path))
                .collect(),
            Ok(()) => Vec::new(),
        };
        panic!("schema {schema_name} violated:\n{}", msgs.join("\n"));
    }
}

#[test]
fn einstein_symmetric_case_matches_schema() {
    let out = run(&["einstein", "--n1", "1", "--n2", "1", "--a", "0", "--b", "1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("einstein.schema.json", &doc);
    let sols = doc["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert!((sols[0]["g1"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((sols[0]["h0"].as_f64().unwrap() - 8.0 / 9.0).abs() < 1e-12);
    assert_eq!(doc["uniqueness"]["root_count"], 1);
}

#[test]
fn einstein_reports_discriminant() {
    let out = run(&["einstein", "--n1", "2", "--n2", "2"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("einstein.schema.json", &doc);
    assert_eq!(doc["uniqueness"]["discriminant"]["num"], "-2880");
    assert_eq!(doc["uniqueness"]["discriminant"]["den"], "1");
}

#[test]
fn einstein_omits_uniqueness_off_kappa_one() {
    let out = run(&["einstein", "--n1", "2", "--n2", "2", "--a", "1", "--b", "1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("einstein.schema.json", &doc);
    assert!(doc.get("uniqueness").is_none());
}

#[test]
fn einstein_usage_error_on_zero_b() {
    let out = run(&["einstein", "--n1", "1", "--n2", "1", "--a", "0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["einstein", "--n1", "1", "--n2", "1", "--bogus", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flow_writes_exact_csv_header_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = run(&[
        "flow", "--n1", "2", "--n2", "2", "--g1", "0.5", "--g2", "0.5", "--h0", "3.0", "--dt",
        "1e-3", "--tmax", "0.5", "--tol", "1e-12", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("flow.schema.json", &doc);
    assert!(doc["outcome"].is_string());
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,g1,g2,h0,s_n1,s_n2,s_t,residual");
    for line in lines {
        assert_eq!(line.split(',').count(), 8);
        for field in line.split(',') {
            let v: f64 = field.parse().expect("numeric field");
            assert!(v.is_finite());
        }
    }
}

#[test]
fn flow_rejects_nonpositive_h0() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = run(&[
        "flow", "--n1", "1", "--n2", "1", "--g1", "1", "--g2", "1", "--h0", "0", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flow_unwritable_path_is_numeric_failure() {
    let out = run(&[
        "flow", "--n1", "1", "--n2", "1", "--g1", "1", "--g2", "1", "--h0", "1", "--out",
        "/nonexistent-dir/t.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flow_einstein_start_converges_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("eq.csv");
    let out = run(&[
        "flow", "--n1", "2", "--n2", "2", "--g1", "0.4", "--g2", "0.4", "--h0", "2.56", "--tmax",
        "10", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["outcome"], "converged");
    let term = &doc["terminal"];
    assert!((term["g1"].as_f64().unwrap() - 0.4).abs() < 1e-8);
    assert!((term["h0"].as_f64().unwrap() - 2.56).abs() < 1e-8);
}

#[test]
fn obstructions_document_matches_schema() {
    let out = run(&[
        "obstructions", "--n1", "1", "--n2", "2", "--g1", "1", "--g2", "1", "--h0", "16",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("obstructions.schema.json", &doc);
    assert!((doc["skt_obstruction"]["value"].as_f64().unwrap() - (-4.0)).abs() < 1e-12);
    assert!(doc["nijenhuis_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn balanced_construction_document() {
    let out = run(&["balanced", "--rank", "3", "--painted", "1,2,3"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("balanced.schema.json", &doc);
    assert_eq!(doc["balanced"], true);
    assert_eq!(doc["mode"], "construct");
    assert_eq!(doc["torus"]["dim"], 1);
    assert_eq!(doc["torus"]["codim_in_center"], 2);
    assert_eq!(doc["lattice"]["lambda"], "8");
    let c: Vec<&str> = doc["c"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["num"].as_str().unwrap())
        .collect();
    assert_eq!(c, vec!["3", "4", "3"]);
    assert_eq!(doc["residual_matches_criterion"], true);
}

#[test]
fn balanced_check_mode() {
    let out = run(&[
        "balanced", "--rank", "3", "--painted", "1,2,3", "--check-only", "--weights",
        "1,1,1,1,1,1",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("balanced.schema.json", &doc);
    assert_eq!(doc["mode"], "check");
    // M-manifold: never balanced; witness present.
    assert_eq!(doc["balanced"], false);
    assert!(doc.get("witness").is_some());
    assert_eq!(doc["residual_matches_criterion"], true);
}

#[test]
fn balanced_rejects_b2_below_three() {
    let out = run(&["balanced", "--rank", "2", "--painted", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("b2"), "error must cite the hypothesis: {err}");
}

#[test]
fn balanced_rejects_non_strict_c() {
    let out = run(&["balanced", "--rank", "3", "--painted", "1,2,3", "--c", "2,3,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cli_is_deterministic() {
    let a = run(&["einstein", "--n1", "3", "--n2", "2"]);
    let b = run(&["einstein", "--n1", "3", "--n2", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_json_document() {
    let out = run(&["verify", "--jobs", "4", "--json"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_valid("verify.schema.json", &doc);
    assert_eq!(doc["passed"], true);
}
