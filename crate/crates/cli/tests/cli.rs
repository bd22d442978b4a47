//! End-to-end tests of the binary: output values, JSON schema, exit codes,
//! and byte-for-byte determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplex-bound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn bound_worked_instance_json() {
    let output = run(&["bound", "2*X1^2 - 2*X1 + 1", "--verify", "100", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["schema_version"], "1.0");
    assert_eq!(record["command"], "bound");
    assert_eq!(record["results"]["global_bound"]["num"], "1");
    assert_eq!(record["results"]["global_bound"]["den"], "4");
    assert_eq!(record["results"]["instance"]["k"], 1);
    assert_eq!(record["results"]["instance"]["d"], 2);
    assert_eq!(record["results"]["instance"]["tau"], 2);
    assert_eq!(record["results"]["grid"]["value"]["num"], "1");
    assert_eq!(record["results"]["grid"]["value"]["den"], "2");
    assert_eq!(record["results"]["grid"]["bound_is_sound"], true);
    let contributions = record["results"]["contributions"].as_array().unwrap();
    assert_eq!(contributions.len(), 3);
    assert_eq!(contributions[0]["kind"], "interior");
}

#[test]
fn bound_output_is_deterministic() {
    let a = run(&["bound", "2*X1^2 - 2*X1 + 1", "--verify", "50", "--json"]);
    let b = run(&["bound", "2*X1^2 - 2*X1 + 1", "--verify", "50", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bound_constant_polynomial() {
    let output = run(&["bound", "1", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["global_bound"]["num"], "1");
    assert_eq!(record["results"]["global_bound"]["den"], "1");
    assert_eq!(record["results"]["closed_form_full"], serde_json::Value::Null);
}

#[test]
fn bound_reads_from_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("simplex_bound_cli_test_poly.txt");
    std::fs::write(&path, "2*X1^2 - 2*X1 + 1\n").unwrap();
    let output = run(&["bound", "--file", path.to_str().unwrap(), "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["global_bound"]["den"], "4");
    std::fs::remove_file(&path).ok();
}

#[test]
fn bound_interior_only_mode() {
    let output = run(&["bound", "2*X1^2 - 2*X1 + 1", "--no-face-recursion", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["interior_bound"]["num"], "1");
    assert_eq!(record["results"]["interior_bound"]["den"], "4");
    assert_eq!(record["results"]["l0"], 1);
    assert_eq!(record["results"]["h1"], 2);
    assert_eq!(record["results"]["s0_coefficients"][1], "-8");
}

#[test]
fn exit_codes() {
    // Parse error.
    assert_eq!(run(&["bound", "2*X1^ + 1"]).status.code(), Some(2));
    // Positivity violated at a vertex.
    assert_eq!(run(&["bound", "X1 - 1"]).status.code(), Some(3));
    // Parity violation in the example family.
    assert_eq!(run(&["example", "1", "3", "2"]).status.code(), Some(2));
    // Unknown selftest scale.
    assert_eq!(run(&["selftest", "bogus"]).status.code(), Some(2));
    // Unknown formula variant.
    assert_eq!(run(&["formula", "1", "2", "1", "nope"]).status.code(), Some(2));
    // Zero parameter.
    assert_eq!(run(&["formula", "0", "2", "1", "full"]).status.code(), Some(2));
    // Missing polynomial.
    assert_eq!(run(&["bound"]).status.code(), Some(2));
}

#[test]
fn formula_values() {
    let output = run(&["formula", "1", "2", "1", "full", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["value"]["num"], "1");
    assert_eq!(record["results"]["value"]["den"], "36864");

    let output = run(&["formula", "1", "2", "1", "simplified", "--json"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["value"]["den"], "65536");

    let output = run(&["formula", "2", "2", "1", "full", "--json"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["value"]["den"], (1u64 << 36).to_string());

    let output = run(&["formula", "1", "2", "1", "interior"]);
    assert!(stdout(&output).contains("1/36864"));
}

#[test]
fn example_family_output() {
    let output = run(&["example", "1", "4", "2", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["polynomial"], "X1^4 + 4*X1^2 - 4*X1 + 1");
    assert_eq!(record["results"]["minimum_upper_bound"]["num"], "1");
    assert_eq!(record["results"]["minimum_upper_bound"]["den"], "16");
    assert_eq!(record["results"]["witness_point"][0]["den"], "2");
}

#[test]
fn nvars_hint_fixes_the_dimension() {
    let output = run(&["bound", "X1", "--nvars", "2", "--json"]);
    // X1 vanishes at the origin of the 2-simplex.
    assert_eq!(output.status.code(), Some(3));

    let output = run(&["bound", "X1 + 1", "--nvars", "2", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["instance"]["k"], 2);
}

#[test]
fn max_dim_guard_rejects_large_quotients() {
    // d = 4, k = 2 needs dimension 16.
    let output = run(&["bound", "X1^4 + X2^4 + 1", "--max-dim", "8"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["bound", "X1^4 + X2^4 + 1", "--max-dim", "16", "--json"]);
    assert!(output.status.success());
}

#[test]
fn grid_oracle_catches_interior_negativity() {
    // Positive at both vertices, negative at 1/2: only the sampling oracle
    // can notice, and it must exit with the positivity code.
    let poly = "10*X1^2 - 10*X1 + 2";
    assert_eq!(run(&["bound", poly]).status.code(), Some(0));
    assert_eq!(run(&["bound", poly, "--verify", "10"]).status.code(), Some(3));
}

#[test]
fn verify_on_a_constant_runs_the_trivial_grid() {
    let output = run(&["bound", "7", "--verify", "10", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["grid"]["value"]["num"], "7");
}

#[test]
fn selftest_quick_passes() {
    let output = run(&["selftest", "quick", "--json"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["results"]["all_passed"], true);
}
