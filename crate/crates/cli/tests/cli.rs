use std::process::Command;

use guinand_cli::{run, EXIT_OK, EXIT_RESIDUAL, EXIT_USAGE};
use proptest::prelude::*;
use serde_json::Value;

fn exec(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("guinand").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn verify_k5_passes() {
    let (code, out, _) = exec(&[
        "verify",
        "--k",
        "5",
        "--phi",
        "t*exp(-pi*t^2/2)",
        "--nmax",
        "400",
        "--tol",
        "1e-10",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!(v["rel_residual"].as_f64().unwrap() <= 1e-10);
    for key in
        ["identity", "k", "lhs", "rhs", "abs_residual", "tail_bound_lhs", "tail_bound_rhs", "terms_used", "truncation"]
    {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn floats_have_seventeen_digits() {
    let (_, out, _) = exec(&["verify", "--k", "3", "--phi", "t*exp(-pi*t^2/2)", "--nmax", "50"]);
    let lhs = json(&out)["lhs"][0].as_f64().unwrap();
    assert!((lhs - 2.860237190695389).abs() < 1e-13);
    assert!(out.contains("\"lhs\":[2.8602371906953"));
    let mantissa = out.split("\"lhs\":[").nth(1).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn coeffs_exact() {
    let (code, out, _) = exec(&["coeffs", "--k", "7", "--format", "exact"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("alpha_7 = 1/60·π^-2\n"));
    assert_eq!(out.lines().count(), 4);
    let (_, out, _) = exec(&["coeffs", "--k", "5", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["coefficients"][0]["exact"], "-1/6·π^-1");
    assert_eq!(v["coefficients"][2]["exact"], "-1/2·π^-1");
}

#[test]
fn sphere_four_methods() {
    let (code, out, _) =
        exec(&["sphere-ft", "--k", "9", "--t", "2.0", "--methods", "closed,bessel,recurrence,besselpoly"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["max_discrepancy"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn sphere_grid_csv() {
    let (code, out, _) = exec(&["sphere-ft", "--k", "5", "--t-grid", "0.5:1.5:0.5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1 + 3 * 4);
    assert_eq!(out.lines().next(), Some("k,t,method,value"));
}

#[test]
fn residual_failure_exits_two() {
    let (code, out, _) = exec(&["verify", "--k", "3", "--phi", "t*exp(-pi*t^2/2)", "--nmax", "1", "--tol", "1e-12"]);
    assert_eq!(code, EXIT_RESIDUAL);
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["verify", "--k", "4", "--phi", "t*exp(-pi*t^2)"],
        vec!["verify", "--k", "3", "--phi", "t*exp(-pi*t^"],
        vec!["verify", "--k", "3", "--phi", "t^2"],
        vec!["verify", "--k", "3", "--phi", "exp(-pi*t^2)"],
        vec!["verify", "--k", "3"],
        vec!["verify", "--k", "3", "--phi", "t*exp(-pi*t^2)", "--format", "exact"],
        vec!["verify", "--k", "3", "--phi", "t*exp(-pi*t^2)", "--frobnicate"],
        vec!["verify-shifted", "--k", "3", "--eta", "1,0,0", "--xi", "0.5,0,0", "--phi", "t*exp(-pi*t^2)"],
        vec!["verify-shifted", "--k", "3", "--eta", "0.5,x,0", "--xi", "0.5,0,0", "--phi", "t*exp(-pi*t^2)"],
        vec!["sphere-ft", "--k", "3"],
        vec!["sphere-ft", "--k", "3", "--t-grid", "2:1:0.1"],
        vec!["sphere-ft", "--k", "3", "--t", "1", "--methods", "fourier"],
        vec!["radial-ft", "--k", "3", "--phi", "t*exp(-pi*t^2)", "--t", "1"],
        vec!["rk", "--k", "3", "--nmax", "100000000"],
        vec!["nonsense"],
        vec![],
    ] {
        let (code, _, err) = exec(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_error_reports_offset() {
    let (_, _, err) = exec(&["verify", "--k", "3", "--phi", "t*exp(-pi*t^2) + $"]);
    assert!(err.contains("byte 17"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn odd_normalization_notice() {
    let (code, _, err) = exec(&["verify", "--k", "3", "--phi", "(1 + t)*exp(-pi*t^2)", "--nmax", "50"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.starts_with("note: --phi is not odd"));
}

#[test]
fn shifted_runs() {
    let (code, out, _) =
        exec(&["verify-shifted", "--k", "5", "--eta", "1/4,0,0,0,0", "--xi", "0,1/3,0,0,0", "--phi", "t*exp(-pi*t^2)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["identity"], "shifted");
}

#[test]
fn radial_and_duality() {
    let (code, out, _) = exec(&["radial-ft", "--k", "5", "--phi", "t^4*exp(-pi*t^2/2)", "--t-grid", "0:2:0.5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 10);
    let (code, out, _) = exec(&["duality", "--k", "5", "--phi", "(t^5 - t)*exp(-pi*t^2)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["identity"], "duality");
}

#[test]
fn rk_check_and_csv() {
    let (code, out, _) = exec(&["rk", "--k", "3", "--nmax", "8", "--check"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["counts"][5], "24");
    assert_eq!(v["bruteforce_agrees"], true);
    let (_, csv, _) = exec(&["rk", "--k", "5", "--nmax", "2", "--format", "csv"]);
    assert_eq!(csv, "n,r_k\n0,1\n1,10\n2,40\n");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = exec(&["verify", "--k", "7", "--phi", "t^3*exp(-pi*t^2)", "--output", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(json(&text)["k"], 7);
}

#[test]
fn deterministic_output() {
    let args = ["verify", "--k", "9", "--phi", "(t^5 - t)*exp(-pi*t^2)", "--nmax", "400"];
    let first = exec(&args).1;
    for _ in 0..3 {
        assert_eq!(exec(&args).1, first);
    }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_guinand"))
}

#[test]
fn binary_exit_codes_and_workcap() {
    let ok = binary().args(["coeffs", "--k", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let capped = binary()
        .env("GUINAND_WORKCAP", "1000")
        .args(["verify-shifted", "--k", "3", "--eta", "0.5,0.5,0.5", "--xi", "0.5,0.5,0.5", "--phi", "t*exp(-pi*t^2)"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("work cap exceeded"));
    let uncapped = binary()
        .env_remove("GUINAND_WORKCAP")
        .args(["verify-shifted", "--k", "3", "--eta", "0.5,0.5,0.5", "--xi", "0.5,0.5,0.5", "--phi", "t*exp(-pi*t^2)"])
        .output()
        .unwrap();
    assert_eq!(uncapped.status.code(), Some(0));
    let failing = binary().args(["verify", "--k", "3", "--phi", "t*exp(-pi*t^2/2)", "--nmax", "1"]).output().unwrap();
    assert_eq!(failing.status.code(), Some(2));
    let usage = binary().args(["verify", "--k"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn malformed_expressions_exit_one(noise in "[-+*/^()a-z0-9. ]{0,24}") {
        // A single unbalanced parenthesis makes every candidate malformed.
        let phi = format!("({noise}");
        let (code, _, err) = exec(&["verify", "--k", "3", "--phi", &phi, "--nmax", "5"]);
        prop_assert_eq!(code, EXIT_USAGE);
        prop_assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn arbitrary_arguments_never_panic(args in proptest::collection::vec("[-a-z0-9.:,/]{0,10}", 0..6)) {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, _) = exec(&refs);
        prop_assert!(code <= 2);
    }

    #[test]
    fn bad_grids_exit_one(a in -5.0f64..5.0, b in -5.0f64..5.0, sep in "[;, ]") {
        let grid = format!("{a}{sep}{b}{sep}0.1");
        let (code, _, _) = exec(&["sphere-ft", "--k", "3", "--t-grid", &grid]);
        prop_assert_eq!(code, EXIT_USAGE);
    }
}
