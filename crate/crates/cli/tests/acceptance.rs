//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its runtime. Criteria 1-7 run the shared checks from
//! `chern_einstein_core::verify`; criterion 8 drives the installed binary.

use std::process::Command;

use chern_einstein_core::verify::{self, CheckResult};

fn assert_passes(r: CheckResult, budget_seconds: f64) {
    println!("{}", r.line());
    assert!(r.passed, "criterion {} failed: {}", r.id, r.details);
    assert!(
        r.seconds < budget_seconds,
        "criterion {} exceeded its {budget_seconds}s budget: {:.2}s",
        r.id,
        r.seconds
    );
}

fn jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[test]
fn criterion_1_exact_symmetric_solutions() {
    assert_passes(verify::criterion_1_symmetric_solutions(), 5.0);
}

#[test]
fn criterion_2_phi_anchors_exact() {
    assert_passes(verify::criterion_2_phi_anchors(), 5.0);
}

#[test]
fn criterion_3_existence_and_uniqueness() {
    assert_passes(verify::criterion_3_existence_uniqueness(jobs()), 30.0);
}

#[test]
fn criterion_4_oracle_equivalence() {
    assert_passes(verify::criterion_4_oracle_equivalence(), 60.0);
}

#[test]
fn criterion_5_obstructions() {
    assert_passes(verify::criterion_5_obstructions(), 30.0);
}

#[test]
fn criterion_6_flow() {
    assert_passes(verify::criterion_6_flow(), 120.0);
}

#[test]
fn criterion_7_balanced() {
    assert_passes(verify::criterion_7_balanced(), 30.0);
}

#[test]
fn criterion_8_verify_subcommand_exits_zero() {
    let start = std::time::Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_chern-einstein-lab"))
        .args(["verify", "--jobs", &jobs().to_string()])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let line = format!(
        "{} criterion 8: verify subcommand exits zero ({:.2}s)",
        if out.status.success() { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    println!("{line}");
    assert!(
        out.status.success(),
        "verify exited {:?}; stdout:\n{stdout}",
        out.status.code()
    );
    // One line per criterion plus the summary.
    for id in 1..=7 {
        assert!(
            stdout.contains(&format!("PASS criterion {id}:")),
            "missing pass line for criterion {id} in:\n{stdout}"
        );
    }
    assert!(stdout.contains("ALL CHECKS PASSED"));
}
