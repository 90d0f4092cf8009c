use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lattice-cover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn ball(dir: &Path, dim: usize, r: &str) -> PathBuf {
    write(dir, &format!("ball{dim}_{r}.json"), &format!(r#"{{"family":"ball","dim":{dim},"params":{{"radius":"{r}"}}}}"#))
}

#[test]
fn minima_of_ball() {
    let dir = tempfile::tempdir().unwrap();
    let body = ball(dir.path(), 2, "2");
    let out = run(&["minima", "--body", body.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lambda"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn sqrt_values_are_strings() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(
        dir.path(),
        "e.json",
        r#"{"family":"ellipsoid","dim":2,"params":{"matrix":[["1/2","0"],["0","1/3"]]}}"#,
    );
    let out = run(&["minima", "--body", body.to_str().unwrap()]);
    assert_eq!(json(&out)["lambda"], serde_json::json!(["sqrt(1/3)", "sqrt(1/2)"]));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let out = run(&["minima", "--body", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing body"));
    assert_eq!(run(&["minima"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["repro", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["cover", "--body", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_flag_caps_enumeration() {
    let out = run(&["--budget", "100", "census", "--n", "3", "--r", "40"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn genpos_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let body = ball(dir.path(), 2, "25");
    let cert_path = dir.path().join("cert.json");
    let out = run(&["--out", cert_path.to_str().unwrap(), "genpos", "--body", body.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(doc["size"], 18);
    assert_eq!(doc["exceeds_bound"], true);
    let cert = doc["certificate"].clone();
    let good = write(dir.path(), "good.json", &cert.to_string());
    let out = run(&["genpos", "verify", "--points", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);

    let mut tampered = cert.clone();
    tampered["lifts"][3]["point"][0] = serde_json::json!(tampered["lifts"][3]["point"][0].as_i64().unwrap() + 1);
    let bad = write(dir.path(), "bad.json", &tampered.to_string());
    let out = run(&["genpos", "verify", "--points", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn genpos_verify_plain_points() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", "[[1,0],[0,1],[1,1]]");
    assert_eq!(run(&["genpos", "verify", "--points", ok.to_str().unwrap()]).status.code(), Some(0));
    let bad = write(dir.path(), "bad.json", "[[1,0],[0,1],[2,0]]");
    assert_eq!(run(&["genpos", "verify", "--points", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn genpos_without_admissible_prime() {
    let dir = tempfile::tempdir().unwrap();
    let body = ball(dir.path(), 2, "2");
    let out = run(&["genpos", "--body", body.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("admissible"));
}

#[test]
fn cover_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let body = ball(dir.path(), 2, "4");
    let out = run(&["cover", "--body", body.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let d = &doc["diagnostics"];
    assert_eq!(d["m"], 1);
    assert_eq!(d["f_alpha"], 1056);
    assert!(d["size"].as_u64().unwrap() <= d["size_bound"].as_u64().unwrap());
    assert_eq!(doc["cover"]["hyperplanes"].as_array().unwrap().len() as u64, d["size"].as_u64().unwrap());
    assert!(doc["cover"]["hyperplanes"][0].is_array());
    assert_eq!(run(&["cover", "--body", body.to_str().unwrap(), "--m", "x"]).status.code(), Some(1));
}

#[test]
fn cover_of_large_minima_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "b.json", r#"{"family":"box","dim":2,"params":{"half_widths":["1/2","4"]}}"#);
    assert_eq!(run(&["cover", "--body", body.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn census_and_claim() {
    let out = run(&["census", "--n", "2", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["h_count"], 4);
    assert_eq!(doc["s_r"], "4");
    let out = run(&["--seed", "3", "census", "--n", "3", "--r", "2", "--claim", "--rho", "6", "--t", "2", "--sample", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["claim"]["samples"].as_array().unwrap().len(), 40);
    assert_eq!(doc["claim"]["seed"], 3);
}

#[test]
fn census_scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let out = run(&["census", "scan", "--n", "2", "--radii", "10,20,40,80", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let slope = json(&out)["fit"]["slope"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&slope));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["r", "h_count", "point_count", "s_r", "ratio"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[0][0], "10");
    let out = run(&["census", "scan", "--n", "2", "--radii", "10,12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "c.json", r#"{"family":"crosspolytope","dim":3,"params":{"scales":["5","5","1"]}}"#);
    let g = json(&run(&["oracle", "g", "--body", body.to_str().unwrap()]));
    assert_eq!(g["value"], 2);
    assert_eq!(g["quantity"], "g");
    let h = json(&run(&["oracle", "h", "--body", body.to_str().unwrap()]));
    assert_eq!(h["value"], 3);
    let out = run(&["oracle", "sandwich", "--body", body.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn repro_is_thread_independent() {
    let one = run(&["--threads", "1", "repro", "remark1"]);
    let many = run(&["--threads", "3", "repro", "remark1"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(json(&one)["pass"], true);
}
