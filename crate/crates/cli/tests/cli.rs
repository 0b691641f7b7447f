use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zeromode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeromode")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_tetrahedron() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = zeromode(&["analyze", "tetrahedron(1)", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("e = 3, r = 0"));

    let report = read_json(&out);
    for key in ["config", "bound_states", "zero_modes", "laurent", "diagnostics"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["zero_modes"]["e"], 3);
    assert_eq!(report["zero_modes"]["r"], 0);
    assert_eq!(report["zero_modes"]["bases"]["eigen"].as_array().unwrap().len(), 3);
    assert_eq!(report["laurent"]["method"], "both");
    // complex entries are [re, im] pairs
    let entry = &report["laurent"]["a_minus2"][0][0];
    assert_eq!(entry.as_array().unwrap().len(), 2);
    assert!((entry[0].as_f64().unwrap() + 6.0 * std::f64::consts::PI).abs() < 1e-8);
    assert!(report["laurent"]["discrepancy"]["a_minus2"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn spectrum_of_single_center() {
    let o = zeromode(&["spectrum", "single(-1)"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().find(|l| l.trim_start().starts_with('1')).unwrap();
    let fields: Vec<f64> = row.split_whitespace().map(|f| f.parse().unwrap()).collect();
    assert!((fields[1] - 12.566371).abs() < 1e-6);
    assert!((fields[2] + 157.9137).abs() < 1e-4);
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 1);
}

#[test]
fn laurent_discrepancy_is_printed() {
    let o = zeromode(&["laurent", "two_center(1)", "--method", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("max discrepancy")).unwrap();
    let value: f64 = line.split(':').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(value <= 1e-8);
}

#[test]
fn kernel_value_and_grid() {
    let o = zeromode(&["kernel", "single(0)", "--z", "0,1", "--x", "1,0,0", "--xp", "-1,0,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let re: f64 = text.trim().split('+').nth(1).unwrap().parse().unwrap();
    assert!((re - 0.0161545).abs() < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("kernel.csv");
    let o = zeromode(&[
        "kernel", "two_center(1)", "--z", "0.5,0.5", "--x", "-2,0.5,0", "--xp", "0,0,3",
        "--grid", csv.to_str().unwrap(), "--x-end", "2,0.5,0", "--points", "11",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2,x3,re,im");
    assert_eq!(lines.len(), 12);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let o = zeromode(&["scan", "single(0)", "--range", "0.01,10", "--points", "100", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("at z = 0.01"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("z,sigma_min"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn registry_show_round_trips_through_a_file() {
    let o = zeromode(&["registry", "show", "equilateral_triangle(2)"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = zeromode(&["analyze", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("e = 2, r = 0"));

    let list = stdout(&zeromode(&["registry", "list"]));
    for name in ["single", "two_center", "equilateral_triangle", "tetrahedron", "moser_spindle"] {
        assert!(list.contains(name));
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("search{i}.json"));
            let o = zeromode(&["search", "--n", "3", "--budget", "2000", "--seed", "5", "--out", out.to_str().unwrap()]);
            assert!(o.status.success());
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);

    let analyses: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("analyze{i}.json"));
            assert!(zeromode(&["analyze", "moser_spindle", "--out", out.to_str().unwrap()]).status.success());
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(analyses[0], analyses[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(zeromode(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zeromode(&["spectrum", "bogus(1)"]).status.code(), Some(2));
    assert_eq!(zeromode(&["laurent", "single(0)", "--method", "guess"]).status.code(), Some(2));
    assert_eq!(zeromode(&["kernel", "single(0)", "--z", "1", "--x", "1,0,0", "--xp", "0,1,0"]).status.code(), Some(2));
    let o = zeromode(&["kernel", "two_center(1)", "--z", "0,1", "--x", "0,0,0", "--xp", "0,1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coincides with center"));
    let o = zeromode(&["kernel", "single(-1)", "--z", "0,12.566370614359172", "--x", "1,0,0", "--xp", "-1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
}
