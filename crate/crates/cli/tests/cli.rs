//! End-to-end runs of the `spectra-forge` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn list_shows_all_models() {
    let o = run(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("eop_kc (closed_form)"));

    let o = run(&["list", "--json"]);
    let arr: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = arr.as_array().unwrap().iter().map(|m| m["id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        ["kc_nd", "dso_nd", "taubnut_kepler", "ycm_5d", "mic_flat", "mic_taubnut", "eop_kc"]
    );
}

#[test]
fn kepler_coulomb_lowest_level() {
    let o = run(&["solve", "--model", "kc_nd", "--set", "N=3,c0=1,c1=0,c2=0,hbar=1", "--qn", "I=1", "--p", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["p", "branch_eps1", "branch_eps2", "u", "E", "phi_min"]);
    let main = rows.iter().find(|r| r[1] == "1" && r[2] == "1").expect("branch (+,+) row");
    assert_eq!(main[4].parse::<f64>().unwrap(), -0.125);
    assert!(stderr(&o).contains("separated-coordinates spectrum"));

    let o = run(&["solve", "--model", "kc_nd", "--set", "N=3,c0=1,c1=0,c2=0,hbar=1", "--qn", "I=0", "--p", "0"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() == -0.5));
}

#[test]
fn exceptional_model_reports_the_coulomb_tower() {
    let o = run(&["solve", "--model", "eop_kc", "--set", "alpha=1,gamma=2,delta=4", "--p", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = csv_rows(&stdout(&o));
    assert!(rows.iter().any(|r| r[4].parse::<f64>().unwrap() == -0.125));
}

#[test]
fn json_mirrors_csv_fields() {
    let o = run(&["solve", "--model", "dso_nd", "--p", "0", "--p-max", "2", "--json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    for key in ["p", "branch_eps1", "branch_eps2", "u", "E", "phi_min"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    let ps: Vec<u64> = rows.iter().map(|r| r["p"].as_u64().unwrap()).collect();
    assert_eq!(ps.first(), Some(&0));
    assert_eq!(ps.last(), Some(&2));
}

#[test]
fn error_exit_codes() {
    let no_bracket = run(&["solve", "--model", "taubnut_kepler", "--set", "a=1,b=1,c0=0,c4=0", "--p", "0"]);
    assert_eq!(no_bracket.status.code(), Some(2));
    assert!(stderr(&no_bracket).contains("sign change"));

    let invalid = run(&["solve", "--model", "kc_nd", "--set", "N=1"]);
    assert_eq!(invalid.status.code(), Some(3));
    assert!(stderr(&invalid).contains("N"));

    assert_eq!(run(&["solve", "--model", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--model", "kc_nd", "--set", "c9=1"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(3));
    assert_eq!(run(&["solve"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn phi_vanishes_at_both_ends() {
    let o = run(&["phi", "--model", "kc_nd", "--p", "2", "--x-min", "0", "--x-max", "3", "--points", "31"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["x", "phi"]);
    assert_eq!(rows.len(), 31);
    let phi: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let scale = phi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    assert!(phi[0].abs() <= 1e-12 * scale);
    assert!(phi[30].abs() <= 1e-12 * scale);
    assert!(phi[1..30].iter().all(|v| *v > 0.0));
}

#[test]
fn phi_closed_column_is_proportional() {
    let o = run(&[
        "phi", "--model", "kc_nd", "--set", "N=4,c1=0.3,c2=0.7", "--qn", "I=1", "--u", "0.4", "--energy", "-0.2",
        "--x-min", "0.1", "--x-max", "6", "--points", "25", "--closed",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["x", "phi", "closed"]);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap())).collect();
    let fmax = pairs.iter().fold(0.0_f64, |m, p| m.max(p.0.abs()));
    let ratios: Vec<f64> = pairs.iter().filter(|p| p.0.abs() > 1e-3 * fmax).map(|p| p.1 / p.0).collect();
    assert!(ratios.len() > 5);
    assert!(ratios.iter().all(|r| (r - ratios[0]).abs() <= 1e-8 * ratios[0].abs()));
}

#[test]
fn phi_outside_the_support_still_emits_values() {
    let o = run(&["phi", "--model", "kc_nd", "--p", "1", "--x-min", "-3", "--x-max", "-1", "--points", "5"]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap().is_finite()));
}

#[test]
fn verify_selectors() {
    let o = run(&["verify", "odes", "--model", "kc_nd", "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let checks = doc["suites"]["odes"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["model"] == "kc_nd"));

    let o = run(&["verify", "oracle", "--model", "eop_kc"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["suites"]["oracle"]["checks"].as_array().unwrap().len(), 3);

    let o = run(&["verify", "duality"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["suites"]["duality"]["passed_count"], 30);
    assert!(stderr(&o).contains("30/30"));
}

#[test]
fn outputs_are_byte_identical() {
    let args = ["verify", "ladders", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let cfg = configs_dir().join("kc_nd.json");
    let args = ["solve", "--config", cfg.to_str().unwrap()];
    let first = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, run(&args).stdout);
}

#[test]
fn every_example_config_solves() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["solve", "--config", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        assert!(csv_rows(&stdout(&o)).1.len() > 1);
        seen += 1;
    }
    assert_eq!(seen, 7);
}

#[test]
fn flags_override_the_config_file() {
    let cfg = configs_dir().join("eop_kc.json");
    let o = run(&["solve", "--config", cfg.to_str().unwrap(), "--p", "2", "--p-max", "2", "--set", "alpha=2"]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    assert!(rows.iter().all(|r| r[0] == "2"));
    assert!(rows.iter().any(|r| (r[4].parse::<f64>().unwrap() + 4.0 / 18.0).abs() < 1e-15));
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = std::env::temp_dir().join(format!("spectra-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema": 1, "model": "kc_nd", "parms": {}}"#).unwrap();
    let o = run(&["solve", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("parms"));
    let future = dir.join("future.json");
    std::fs::write(&future, r#"{"schema": 2, "model": "kc_nd"}"#).unwrap();
    assert_eq!(run(&["solve", "--config", future.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}
