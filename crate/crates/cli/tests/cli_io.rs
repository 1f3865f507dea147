//! End-to-end runs of the compiled binary: flags, formats, exit codes, and
//! byte-level determinism under a fixed seed.

use std::process::{Command, Output};

fn btkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btkit"))
        .args(args)
        .env_remove("BTKIT_SEED")
        .env_remove("BTKIT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 output")
}

#[test]
fn tree_reports_the_ball_and_its_star_structure() {
    let out = btkit(&["tree", "--radius", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("5 vertices, 4 edges"));
    assert!(text.contains("star(0) = {0, 5, 6, 7, 8}"));

    let out = btkit(&["tree", "--radius", "0"]);
    assert!(stdout(&out).contains("1 vertices, 0 edges"));
}

#[test]
fn tree_dot_output_is_well_formed() {
    let out = btkit(&["tree", "--radius", "1", "--format", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph tree {"));
    assert!(text.trim_end().ends_with('}'));
    assert_eq!(text.matches(" -- ").count(), 4);
}

#[test]
fn membership_verdicts_drive_the_exit_code() {
    let out = btkit(&["member", "[[1,9],[0,1]]", "--facet", "vertex:0", "--e", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("is a member"));

    let out = btkit(&["member", "[[1,1],[0,1]]", "--facet", "vertex:0", "--e", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("is not a member"));
    assert!(stdout(&out).contains("violated"));
}

#[test]
fn omega_of_the_identity_is_infinite() {
    let out = btkit(&["omega", "[[1,0],[0,1]]"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("omega = inf"));

    let out = btkit(&["omega", "[[1,27],[0,1]]", "--e", "2"]);
    assert!(stdout(&out).contains("omega = 2, reduced weight = 1"));
}

#[test]
fn omega_outside_the_group_is_an_error() {
    let out = btkit(&["omega", "[[1,1],[0,1]]", "--e", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not in the filtration group"));
}

#[test]
fn mahler_prints_integral_coefficients() {
    let out = btkit(&["mahler", "0,0,9", "--points", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("checked on 20 points: exact"));
    assert!(text.contains("all coefficients integral: true"));
}

#[test]
fn a_failing_suite_name_is_rejected() {
    let out = btkit(&["check", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown suite"));
}

#[test]
fn passing_suites_exit_zero() {
    let out = btkit(&["check", "--suite", "stirling"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("suite stirling"));
    assert!(stdout(&out).contains("all checks passed"));
}

#[test]
fn seeded_json_output_is_byte_identical() {
    let args = [
        "check",
        "--suite",
        "covariance",
        "--format",
        "json",
        "--seed",
        "5",
    ];
    let a = btkit(&args);
    let b = btkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let via_env = Command::new(env!("CARGO_BIN_EXE_btkit"))
        .args(["check", "--suite", "covariance", "--format", "json"])
        .env("BTKIT_SEED", "5")
        .output()
        .expect("binary runs");
    assert_eq!(a.stdout, via_env.stdout);
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = btkit(&["member"]);
    assert_eq!(out.status.code(), Some(2));

    let out = btkit(&["norm", "--dirac", "[[1,0],[0,1]]", "--var", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exactly one"));
}

#[test]
fn dot_is_refused_where_nothing_draws() {
    let out = btkit(&["levels", "vertex:0", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no dot output"));
}
