use std::process::{Command, Output};

use serde_json::Value;

fn semilag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semilag"))
        .args(args)
        .env_remove("SEMILAG_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn coeffs_both_routes_agree() {
    let out = semilag(&["coeffs", "--alpha", "1", "--t", "0", "--n-max", "1", "--route", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0][..5], ["t", "n", "a2_hankel", "a2_discrete", "a2_abs_diff"]);
    let n1 = &rows[2];
    assert_eq!(n1[1], "1");
    assert!(n1[2].starts_with("2.146018366"));
    assert!(n1[3].starts_with("2.146018366"));
    assert!(n1[4].parse::<f64>().unwrap() <= 1e-25);
}

#[test]
fn invalid_inputs_exit_with_usage_code() {
    let out = semilag(&["coeffs", "--alpha", "1", "--t", "0", "--n-max", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error,message\ndomain,"));

    let out = semilag(&["coeffs", "--alpha", "-1", "--t", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "domain");

    let out = semilag(&["coeffs", "--alpha", "x", "--t", "0"]);
    assert_eq!(out.status.code(), Some(2));

    // no grid at all, and an unknown flag
    assert_eq!(semilag(&["coeffs", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(semilag(&["coeffs", "--alpha", "1", "--t", "0", "--bogus"]).status.code(), Some(2));
    assert_eq!(semilag(&["coeffs", "--alpha", "1", "--t", "0", "--precision", "32"]).status.code(), Some(2));
}

#[test]
fn exhaustion_has_its_own_exit_code() {
    let out = semilag(&["coeffs", "--alpha", "1", "--t", "1000", "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("precision_exhausted"));
}

#[test]
fn riccati_suite_passes() {
    let out = semilag(&["verify", "--suite", "riccati", "--alpha", "1", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][..4], ["riccati", "riccati", "0", "z"]);
    assert!(rows[1][5].parse::<f64>().unwrap().abs() < 1e-60);
    assert_eq!(rows[1][7], "true");
}

#[test]
fn full_suite_passes_on_grid() {
    let out = semilag(&[
        "verify", "--suite", "all", "--alpha", "1", "--t-min", "-1", "--t-max", "2", "--t-steps", "7", "--n-max", "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out);
    assert!(rows.len() > 1000);
    let suites: std::collections::BTreeSet<_> = rows[1..].iter().map(|r| r[0].clone()).collect();
    assert_eq!(suites.len(), 7);
    assert!(rows[1..].iter().all(|r| r[7] == "true"));
}

#[test]
fn fault_flag_produces_failures() {
    let out = semilag(&["verify", "--suite", "all", "--alpha", "1", "--t", "0.5", "--n-max", "3", "--fault"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = csv_rows(&out);
    for suite in ["toda", "p4", "riccati", "ladder", "backlund", "dpi", "cross"] {
        assert!(rows.iter().any(|r| r[0] == suite && r[7] == "false"), "{suite}");
    }
    // a perturbation below the route tolerance goes unnoticed
    let out = semilag(&["verify", "--suite", "cross", "--alpha", "1", "--t", "0.5", "--n-max", "2", "--fault", "1e-40"]);
    assert_eq!(out.status.code(), Some(0));
    let out = semilag(&["verify", "--suite", "cross", "--alpha", "1", "--t", "0.5", "--n-max", "2", "--fault", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ladder_suite_needs_positive_alpha() {
    let out = semilag(&["verify", "--suite", "ladder", "--alpha", "-0.5", "--t", "1", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = semilag(&["verify", "--alpha", "-0.5", "--t", "1", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping suite ladder"));
    assert!(!stdout(&out).lines().any(|l| l.starts_with("ladder,")));
}

#[test]
fn trace_q_single_row() {
    let out = semilag(&[
        "trace", "--quantity", "q", "--alpha", "1", "--n-max", "0", "--t-min", "0", "--t-max", "0", "--t-steps", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], ["z", "n", "q", "q1"]);
    assert!(rows[1][2].starts_with("1.7724538509055160272981674833411451827975494561223871282138"));
    assert!(rows[1][3].starts_with("-1.141592653589793238462643383279502884197169399375105820974"));
}

#[test]
fn csv_and_json_carry_identical_values() {
    for quantity in ["coeffs", "q", "freud"] {
        let base = ["trace", "--quantity", quantity, "--alpha", "2.5", "--t-min", "-1", "--t-max", "1", "--t-steps", "3", "--n-max", "3"];
        let csv = csv_rows(&semilag(&base));
        let mut args = base.to_vec();
        args.extend(["--format", "json"]);
        let json: Vec<Value> = serde_json::from_slice(&semilag(&args).stdout).unwrap();
        assert_eq!(csv.len() - 1, json.len(), "{quantity}");
        for (row, obj) in csv[1..].iter().zip(&json) {
            let obj = obj.as_object().unwrap();
            let keys: Vec<_> = obj.keys().cloned().collect();
            assert_eq!(keys, csv[0], "{quantity}");
            for (cell, value) in row.iter().zip(obj.values()) {
                assert_eq!(value.as_str().unwrap(), cell);
            }
        }
    }
}

#[test]
fn output_is_deterministic_and_ordered() {
    let args = ["coeffs", "--alpha", "0.5", "--t-min", "-2", "--t-max", "3", "--t-steps", "6", "--n-max", "5"];
    let first = semilag(&args);
    let second = semilag(&args);
    assert_eq!(first.stdout, second.stdout);
    let rows = csv_rows(&first);
    assert_eq!(rows.len(), 1 + 6 * 6);
    let ts: Vec<f64> = rows[1..].iter().step_by(6).map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(ts, [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    // full-precision rendering: 78 significant digits at 256 bits
    let mantissa = rows[8][3].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 78);
}

#[test]
fn precision_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_semilag"))
        .args(["coeffs", "--alpha", "1", "--t", "0", "--n-max", "1"])
        .env("SEMILAG_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let b0 = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().to_string();
    // ceil(128 · log10 2) = 39 digits
    assert_eq!(b0.split('e').next().unwrap().replace('.', "").len(), 39);
}
