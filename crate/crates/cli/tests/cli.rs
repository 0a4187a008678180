use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tentspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bloch_norm_of_the_identity() {
    let v = json(&["norm", "bloch", "--f", "poly:0,1", "--alpha", "1"]);
    assert_eq!(v["value"], 1.0);
}

#[test]
fn area_measure_box_constant() {
    let v = json(&["carleson", "box", "--mu", "power:2", "--s", "2", "--depth", "12"]);
    let x = v["value"].as_f64().unwrap();
    assert!((x - 2.0).abs() <= 0.02, "{x}");
}

#[test]
fn unknown_names_list_the_valid_set() {
    for (args, listed) in [
        (vec!["carleson", "log", "--mu", "bogus:1"], "power, logpower"),
        (vec!["norm", "fps", "--f", "bogus:1"], "poly, kprim"),
        (vec!["norm", "nope", "--f", "poly:1"], "fps, bloch"),
        (vec!["verify", "nope"], "quadrature_closed_form"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(listed), "{args:?}: {err}");
    }
}

#[test]
fn invalid_parameters_exit_with_one() {
    let out = run(&["norm", "fps", "--f", "poly:0,1", "--p", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["lattice", "--cap", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["lattice", "--nodes", "12x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let out = run(&["carleson", "log", "--mu", "logpower:1.5,2", "--p", "2", "--s", "1.5", "--depth", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(text, again);
}

#[test]
fn thread_count_does_not_change_numbers() {
    let args = [
        "embed",
        "--mu",
        "logpower:1.5,2",
        "--s",
        "1.5",
        "--battery",
        "poly:0,1",
        "--battery",
        "log:0.5",
        "--depth",
        "6",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn csv_has_a_header_and_numeric_columns() {
    let out = run(&["carleson", "vanishing", "--mu", "logpower:1.5,3", "--p", "2", "--s", "1.5", "--depth", "6", "--format", "csv"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(r.headers().unwrap(), vec!["depth", "value"]);
    let rows: Vec<(u32, f64)> = r.records().map(|x| {
        let x = x.unwrap();
        (x[0].parse().unwrap(), x[1].parse().unwrap())
    }).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.windows(2).all(|w| w[1].1 <= w[0].1));
}

#[test]
fn spec_file_supplies_the_function() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.toml");
    std::fs::write(&path, "f = \"poly:0,1\"\n").unwrap();
    let v = json(&["norm", "bloch", "--alpha", "1", "--spec-file", path.to_str().unwrap()]);
    assert_eq!(v["value"], 1.0);
    std::fs::write(&path, "h = \"poly:0,1\"\n").unwrap();
    let out = run(&["norm", "bloch", "--spec-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify", "geometry_identities", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["suites"][0]["suite_id"], "geometry_identities");
}

#[test]
fn constant_symbol_operator_ratios() {
    let v = json(&["op", "jg", "--g", "poly:2", "--battery", "poly:0,1", "--battery", "poly:1,0,1", "--depth", "4"]);
    let rows = v["report"]["ratios"]["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["ratio"] == 0.0));
    let v = json(&["op", "ig", "--g", "poly:2", "--battery", "poly:0,1", "--depth", "4"]);
    assert_eq!(v["report"]["ratios"]["rows"][0]["ratio"], 2.0);
}
