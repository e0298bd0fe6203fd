use std::process::{Command, Output};

use serde_json::Value;

fn qcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn estimate_worst_case_layout() {
    let out = stdout(&qcc(&["--dim", "3p1", "estimate", "--L", "1", "--T", "4"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "T,C_total,C_causal,C_retro,ratio_rc,ratio_rtotal");
    assert_eq!(lines.next().unwrap(), "4,0.636619772368,0.477464829276,0.159154943092,0.333333333333,0.25");
}

#[test]
fn undefined_ratios_print_nan() {
    let out = stdout(&qcc(&["--dim", "1p1", "estimate", "--L", "1", "--T", "0"]));
    assert!(out.lines().nth(1).unwrap().ends_with("nan,nan"));
}

#[test]
fn missing_separation_is_a_usage_error() {
    let out = qcc(&["--dim", "3p1", "estimate", "--T", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn invalid_value_fails() {
    let out = qcc(&["--dim", "3p1", "estimate", "--L", "-1", "--T", "4"]);
    assert!(!out.status.success());
    let out = qcc(&["--dim", "3p1", "estimate", "--L", "1", "--T", "4", "--S", "1"]);
    assert!(!out.status.success());
}

#[test]
fn sweep_shows_retro_plateau() {
    let out = stdout(&qcc(&["--dim", "3p1", "sweep", "--L", "1", "--T-min", "0", "--T-max", "10", "--steps", "21"]));
    let table = rows(&out);
    assert_eq!(table.len(), 21);
    for r in table.iter().filter(|r| r[0] >= 2.0) {
        assert!((r[3] - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-11);
    }
}

#[test]
fn nonpert_sweep_shows_shift() {
    let out = stdout(&qcc(&[
        "--dim", "3p1", "sweep", "--mode", "nonpert", "--L", "1", "--T-min", "2.5", "--T-max", "6.5", "--steps", "5",
        "--lambda", "1",
    ]));
    let table = rows(&out);
    for w in table.windows(2) {
        // Steps of exactly L: the causal visibility catches up one row later.
        assert!((w[0][1] - w[1][2]).abs() < 1e-11);
    }
}

#[test]
fn nonpert_sweep_rejects_short_durations() {
    let out = qcc(&["--dim", "3p1", "sweep", "--mode", "nonpert", "--L", "1", "--T-min", "1", "--T-max", "3", "--steps", "3"]);
    assert!(!out.status.success());
}

#[test]
fn json_document_shape() {
    let out = stdout(&qcc(&["--dim", "1p1", "--format", "json", "estimate", "--L", "1", "--T", "2"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], "qcc-1");
    assert_eq!(doc["command"], "estimate");
    assert!(doc["meta"]["version"].is_string());
}

#[test]
fn evolve_reports_bounded_change() {
    let out = stdout(&qcc(&["--dim", "3p1", "evolve", "--L", "1", "--T", "4"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let r = &doc["result"];
    assert!(r["change_norm"].as_f64().unwrap() > 0.0);
    assert!(r["C_total"].as_f64().unwrap() > 0.0);
}

#[test]
fn audit_verdicts() {
    let run = |model: &str| -> Value {
        let out = stdout(&qcc(&["--dim", "3p1", "audit", "--model", model, "--geometry", "fig2", "--L", "1", "--T", "4"]));
        serde_json::from_str(&out).unwrap()
    };
    let qft = run("qft");
    assert_eq!(qft["result"]["verdict"]["geometry_class"], "retro_subregion_inert");
    assert_eq!(qft["result"]["verdict"]["witness_norm"], 0.0);
    let qc = run("qc");
    assert_eq!(qc["result"]["verdict"]["geometry_class"], "retro_subregion_active");
}

#[test]
fn gme_report() {
    let out = stdout(&qcc(&["gme", "--m1", "1e-14", "--m2", "1e-14", "--L", "1e-6", "--T", "1", "--epsilon", "1e-6", "--resolution", "1e-3"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["qc_indistinguishable"], true);
}

#[test]
fn hdiff_table() {
    let out = stdout(&qcc(&["hdiff", "--T", "5", "--T", "10", "--format", "csv"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "T,hdiff,ratio_to_previous");
    let second: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert!((second[2].parse::<f64>().unwrap() - 0.25).abs() < 0.0125);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "estimate", "dim": "3p1", "L": 1.0, "T": 4.0}"#).unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = stdout(&qcc(&["--config", path]));
    assert!(from_file.lines().nth(1).unwrap().starts_with("4,0.636619772368"));
    let overridden = stdout(&qcc(&["--config", path, "estimate", "--T", "6"]));
    assert!(overridden.lines().nth(1).unwrap().starts_with("6,"));
}

#[test]
fn unknown_config_key_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"command": "estimate", "bogus": 1}"#).unwrap();
    assert!(!qcc(&["--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn unwritable_output_fails() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = qcc(&["--dim", "3p1", "--out", target.to_str().unwrap(), "estimate", "--L", "1", "--T", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.csv");
    let args = ["--dim", "1p1", "sweep", "--L", "1", "--S", "0.5", "--T-min", "0", "--T-max", "5", "--steps", "11"];
    let printed = stdout(&qcc(&args));
    let mut with_out = vec!["--out", target.to_str().unwrap()];
    with_out.extend_from_slice(&args);
    stdout(&qcc(&with_out));
    assert_eq!(std::fs::read_to_string(&target).unwrap(), printed);
}
