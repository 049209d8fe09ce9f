//! End-to-end tests of the `qfdensity` binary: output formats, exit codes,
//! and the JSON round-trip invariant, exercised through a real subprocess.

use std::process::{Command, Output};
use std::str::FromStr;

use qfdensity::Rational;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfdensity"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

#[track_caller]
fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout_of(output),
        stderr_of(output)
    );
}

// ---------------------------------------------------------------- density

#[test]
fn density_prints_value_and_branch() {
    let out = run(&["density", "--a", "1", "--b", "3", "--c", "3", "--p", "3", "--m", "1"]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).trim(), "alpha = 2, branch = m1<b1/even");
}

#[test]
fn density_zero_value_succeeds() {
    let out = run(&["density", "--a", "1", "--b", "9", "--c", "9", "--p", "3", "--m", "3"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("alpha = 0"), "got: {text}");
}

#[test]
fn density_json_is_exact_and_round_trips() {
    let out = run(&[
        "density", "--a", "1", "--b", "1", "--c", "1", "--p", "3", "--m", "0", "--json",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    let record: serde_json::Value = serde_json::from_str(&text).expect("stdout is one JSON object");

    assert_eq!(record["density"], "4/3");
    assert_eq!(record["p"], 3);
    assert_eq!(record["m"], 0);
    assert_eq!(record["form"]["a"], 1);

    // The density string is an exact rational, never a float.
    let parsed = Rational::from_str(record["density"].as_str().unwrap()).expect("parses back");
    assert_eq!(parsed, Rational::new(4.into(), 3.into()));

    // parse(emit(x)) = x.
    let reemitted = serde_json::to_string(&record).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reemitted).unwrap();
    assert_eq!(record, reparsed);
}

#[test]
fn density_json_includes_requested_counts() {
    let out = run(&[
        "density", "--a", "1", "--b", "3", "--c", "3", "--p", "3", "--m", "1",
        "--show-counts", "2", "--json",
    ]);
    assert_exit(&out, 0);
    let record: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("stdout is one JSON object");
    let counts = record["counts"].as_array().expect("counts present");
    assert_eq!(counts.len(), 2);
    assert_eq!(counts[0][0], 1);
    assert_eq!(counts[0][1], "18");
    assert_eq!(counts[1][1], "162");
}

#[test]
fn density_show_counts_prints_count_lines() {
    let out = run(&[
        "density", "--a", "1", "--b", "3", "--c", "3", "--p", "3", "--m", "1",
        "--show-counts", "2",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("r(3^1) = 18"), "got: {text}");
    assert!(text.contains("r(3^2) = 162"), "got: {text}");
}

#[test]
fn density_rejects_composite_prime_naming_the_flag() {
    let out = run(&["density", "--a", "1", "--b", "1", "--c", "1", "--p", "4", "--m", "1"]);
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("--p"), "stderr: {}", stderr_of(&out));
}

#[test]
fn density_rejects_zero_coefficient_naming_the_flag() {
    let out = run(&["density", "--a", "1", "--b", "0", "--c", "1", "--p", "3", "--m", "1"]);
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("--b"), "stderr: {}", stderr_of(&out));
}

// ------------------------------------------------------------------ count

#[test]
fn count_with_composite_modulus() {
    let out = run(&["count", "--a", "1", "--b", "1", "--c", "1", "--m", "1", "--n", "3"]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).trim(), "6");
}

#[test]
fn count_stratified_null_target() {
    let out = run(&[
        "count", "--a", "1", "--b", "1", "--c", "1", "--m", "0", "--p", "3", "--k", "2",
        "--method", "stratified",
    ]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).trim(), "99");
}

#[test]
fn count_multi_method_verdict() {
    let out = run(&[
        "count", "--a", "1", "--b", "3", "--c", "3", "--m", "1", "--p", "3", "--k", "1",
        "--method", "brute", "--method", "gauss-float",
    ]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).trim(), "18 18 MATCH");
}

#[test]
fn count_all_three_methods_agree() {
    let out = run(&[
        "count", "--a", "2", "--b", "5", "--c", "7", "--m", "3", "--p", "5", "--k", "2",
        "--method", "brute", "--method", "gauss-float", "--method", "stratified",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.trim().ends_with("MATCH"), "got: {text}");
}

#[test]
fn count_over_cap_is_a_resource_failure() {
    let out = run(&["count", "--a", "1", "--b", "1", "--c", "1", "--m", "1", "--n", "99999"]);
    assert_exit(&out, 3);
}

#[test]
fn count_cap_flag_lifts_the_limit() {
    let out = run(&[
        "count", "--a", "1", "--b", "1", "--c", "1", "--m", "1", "--n", "11", "--cap", "20",
    ]);
    assert_exit(&out, 0);
}

#[test]
fn count_requires_a_modulus() {
    let out = run(&["count", "--a", "1", "--b", "1", "--c", "1", "--m", "1"]);
    assert_exit(&out, 2);
    let err = stderr_of(&out);
    assert!(err.contains("--n") && err.contains("--p"), "stderr: {err}");
}

#[test]
fn count_stratified_requires_prime_power_modulus() {
    let out = run(&[
        "count", "--a", "1", "--b", "1", "--c", "1", "--m", "1", "--n", "9",
        "--method", "stratified",
    ]);
    assert_exit(&out, 2);
    assert!(
        stderr_of(&out).contains("--method"),
        "stderr: {}",
        stderr_of(&out)
    );
}

// ------------------------------------------------------------------ table

#[test]
fn table_emits_fixed_header_and_rows() {
    let out = run(&["table", "--a", "1", "--b", "1", "--c", "1", "--p", "3", "--m-range", "0..2"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "m,alpha_num,alpha_den,branch");
    assert!(lines[1].starts_with("0,4,3,"), "got: {}", lines[1]);
    assert!(lines[2].starts_with("1,2,3,"), "got: {}", lines[2]);
}

#[test]
fn table_accepts_negative_targets() {
    let out = run(&["table", "--a", "1", "--b", "1", "--c", "1", "--p", "3", "--m-range", "-2..2"]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).lines().count(), 6);
}

#[test]
fn table_rejects_malformed_range() {
    for bad in ["5..2", "1..x", "nope"] {
        let out = run(&["table", "--a", "1", "--b", "1", "--c", "1", "--p", "3", "--m-range", bad]);
        assert_exit(&out, 2);
        assert!(
            stderr_of(&out).contains("--m-range"),
            "stderr: {}",
            stderr_of(&out)
        );
    }
}

// ------------------------------------------------------------------ gauss

#[test]
fn gauss_prints_symbolic_value_with_float_check() {
    let out = run(&["gauss", "--a", "1", "--p", "3", "--k", "1"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert_eq!(text.lines().next().unwrap(), "i * 3^(1/2)");
    assert!(text.lines().nth(1).unwrap().starts_with("float check:"));
}

#[test]
fn gauss_degenerate_and_ramified_cases() {
    let out = run(&["gauss", "--a", "9", "--p", "3", "--k", "2"]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).lines().next().unwrap(), "1 * 3^(2)");

    let out = run(&["gauss", "--a", "2", "--p", "3", "--k", "2"]);
    assert_exit(&out, 0);
    assert_eq!(stdout_of(&out).lines().next().unwrap(), "1 * 3^(1)");
}

#[test]
fn gauss_rejects_zero_depth() {
    let out = run(&["gauss", "--a", "1", "--p", "3", "--k", "0"]);
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("--k"), "stderr: {}", stderr_of(&out));
}

// ----------------------------------------------------------------- verify

#[test]
fn verify_clamped_grid_passes() {
    let out = run(&[
        "verify", "--p-max", "3", "--c1-max", "1", "--m1-max", "1", "--cap", "1000",
    ]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("all families PASS"), "got: {text}");
    // One headline per cross-check family.
    for number in 1..=11 {
        assert!(
            text.contains(&format!("criterion {number} ")),
            "missing family {number}: {text}"
        );
    }
}

#[test]
fn verify_smallest_grid_still_checks_something() {
    let out = run(&["verify", "--p-max", "3", "--m1-max", "0", "--c1-max", "0"]);
    assert_exit(&out, 0);
    let text = stdout_of(&out);
    assert!(text.contains("all families PASS"), "got: {text}");
    assert!(!text.contains("(0 checks"), "a family ran zero checks: {text}");
}
