//! End-to-end runs of the installed binary: output shapes, the exit-code
//! contract, determinism, and destination handling.

use std::path::Path;
use std::process::{Command, Output};

fn dkv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkv"))
        .args(args)
        .env_remove("DKV_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn spectrum_table_lists_the_reference_level() {
    let out = dkv(&["spectrum", "--A", "10.25", "--B", "12.5"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("2.2879774437"), "middle root missing:\n{text}");
    assert!(text.contains("-3.1968633391"), "energy missing:\n{text}");
    assert!(text.contains("(0.5000000000, 2.5000000000)"), "window missing:\n{text}");
    assert_eq!(text.lines().count(), 3, "one level means three table lines");
}

#[test]
fn spectrum_csv_round_trips_the_roots() {
    let out = dkv(&["spectrum", "--A", "10.25", "--B", "12.5", "--format", "csv"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,root_left,root_middle,root_right,selected,window_low,window_high,energy,alpha,beta"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "0");
    let middle: f64 = row[2].parse().unwrap();
    assert!((middle - 2.2879774436830647).abs() < 1e-14);
    let energy: f64 = row[7].parse().unwrap();
    assert!((energy - -3.1968633391194268).abs() < 1e-12);
}

#[test]
fn spectrum_below_the_window_yields_an_empty_table() {
    let out = dkv(&["spectrum", "--A", "1", "--B", "12.5"]);
    assert_eq!(code_of(&out), 0, "no levels is not an error");
    assert_eq!(stdout_of(&out).lines().count(), 2, "header and rule only");
}

#[test]
fn too_weak_linear_strength_exits_2() {
    let out = dkv(&["spectrum", "--A", "10.25", "--B", "0.4"]);
    assert_eq!(code_of(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("B"), "message names the offending strength: {err}");
}

#[test]
fn negative_strengths_parse_as_values() {
    let out = dkv(&["spectrum", "--A", "-3.5", "--B", "12.5"]);
    assert_eq!(code_of(&out), 0, "leading dash must not read as a flag");
}

#[test]
fn wavefunction_missing_level_exits_3() {
    let out = dkv(&["wavefunction", "--A", "10.25", "--B", "12.5", "--n", "1"]);
    assert_eq!(code_of(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("n = 1"), "message names the level: {err}");
}

#[test]
fn wavefunction_rejects_table_format() {
    let out = dkv(&[
        "wavefunction", "--A", "10.25", "--B", "12.5", "--format", "table",
    ]);
    assert_eq!(code_of(&out), 2, "samples have no table rendering");
}

#[test]
fn wavefunction_csv_is_byte_identical_across_runs() {
    let args = [
        "wavefunction", "--A", "10.25", "--B", "12.5", "--n", "0", "--x-min", "-5", "--x-max",
        "5", "--h", "0.05",
    ];
    let first = dkv(&args);
    let second = dkv(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert_eq!(text.lines().next().unwrap(), "x,psi");
    assert_eq!(text.lines().count(), 202, "201 samples plus header");
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert!(cell.contains('e'), "17-significant-digit scientific form: {cell}");
    assert_eq!(cell.split('e').next().unwrap().len(), "7.3642347142178078".len());
}

#[test]
fn wavefunction_sign_changes_match_the_level_index() {
    let out = dkv(&[
        "wavefunction", "--A", "135", "--B", "200", "--n", "1", "--x-min", "-10", "--x-max",
        "25", "--h", "0.05",
    ]);
    assert_eq!(code_of(&out), 0);
    let psi: Vec<f64> = stdout_of(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let changes = psi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 1, "one node for n = 1");
}

#[test]
fn verify_passes_at_the_reference_point() {
    let out = dkv(&[
        "verify", "--A", "10.25", "--B", "12.5", "--x-min", "-15", "--x-max", "40", "--h",
        "0.01",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("oracle"));
    assert!(text.contains("susy_ground"));
    assert!(text.contains("mirror_identity"));
    assert!(!text.contains("false"), "every check passes:\n{text}");
}

#[test]
fn verify_with_leftmost_root_exits_1() {
    let out = dkv(&[
        "verify", "--A", "10.25", "--B", "12.5", "--x-min", "-15", "--x-max", "40", "--h",
        "0.01", "--select", "leftmost",
    ]);
    assert_eq!(code_of(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("oracle"), "the grid oracle is the failing check: {err}");
}

#[test]
fn verify_with_zero_tolerance_exits_1() {
    let out = dkv(&[
        "verify", "--A", "10.25", "--B", "12.5", "--x-min", "-15", "--x-max", "40", "--h",
        "0.01", "--tol", "0",
    ]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn verify_csv_lists_every_check() {
    let out = dkv(&[
        "verify", "--A", "10.25", "--B", "12.5", "--x-min", "-15", "--x-max", "40", "--h",
        "0.01", "--format", "csv",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert_eq!(text.lines().next().unwrap(), "check,worst,tolerance,pass");
    for name in [
        "oracle", "susy_ground", "strength_identity", "half_line_map", "class_ode",
        "mirror_identity",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} row missing:\n{text}");
    }
}

#[test]
fn natanzon_csv_carries_oracle_deltas() {
    let out = dkv(&[
        "natanzon", "--f", "48", "--h0", "8", "--h1", "8", "--a", "1", "--c0", "1", "--c1",
        "1", "--format", "csv",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "n,energy,equation_residual,oracle_energy,abs_delta_e,alpha,beta,delta"
    );
    let delta: f64 = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!(delta < 1e-4, "oracle delta {delta}");
}

#[test]
fn natanzon_logistic_case_lists_three_levels() {
    let out = dkv(&[
        "natanzon", "--f", "48", "--h0", "8", "--h1", "8", "--a", "0", "--c0", "1", "--c1",
        "1",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 5, "three levels plus header lines");
    assert!(text.contains("5.0000000000"), "middle level energy:\n{text}");
    assert!(text.contains("8.0000000000"), "top level energy:\n{text}");
}

#[test]
fn natanzon_respects_the_level_cap() {
    let out = dkv(&[
        "natanzon", "--f", "48", "--h0", "8", "--h1", "8", "--a", "0", "--c0", "1", "--c1",
        "1", "--n-max", "1",
    ]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).lines().count(), 4, "two levels plus header lines");
}

#[test]
fn natanzon_with_sign_changing_weight_exits_2() {
    let out = dkv(&[
        "natanzon", "--f", "48", "--h0", "8", "--h1", "8", "--a", "0", "--c0", "-1", "--c1",
        "1",
    ]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn out_dir_variable_anchors_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dkv"))
        .args(["spectrum", "--A", "10.25", "--B", "12.5", "--format", "csv", "--out", "spec.csv"])
        .env("DKV_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    assert!(written.starts_with("n,root_left"));
}

#[test]
fn absolute_out_path_ignores_the_variable() {
    let dir = tempfile::tempdir().unwrap();
    let decoy = tempfile::tempdir().unwrap();
    let target = dir.path().join("direct.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_dkv"))
        .args(["spectrum", "--A", "10.25", "--B", "12.5", "--format", "csv"])
        .arg("--out")
        .arg(&target)
        .env("DKV_OUT_DIR", decoy.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.exists());
    assert!(!decoy.path().join(Path::new("direct.csv")).exists());
}

#[test]
fn stamp_appears_only_in_json() {
    let csv = dkv(&["spectrum", "--A", "10.25", "--B", "12.5", "--format", "csv", "--stamp"]);
    assert!(!stdout_of(&csv).contains("stamp"));
    let json = dkv(&["spectrum", "--A", "10.25", "--B", "12.5", "--format", "json", "--stamp"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert!(v["stamp"].is_u64());
    let plain = dkv(&["spectrum", "--A", "10.25", "--B", "12.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&plain)).unwrap();
    assert!(v.get("stamp").is_none(), "stamp is opt-in");
}

#[test]
fn json_spectrum_is_byte_identical_across_runs() {
    let args = ["spectrum", "--A", "135", "--B", "200", "--format", "json"];
    let first = dkv(&args);
    let second = dkv(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}
