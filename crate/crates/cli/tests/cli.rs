use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sync-entangle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn no_arguments_prints_usage() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn classical_sim_conserves_l2_and_reaches_l() {
    let out = run(&["classical-sim", "--init", "0,0.6,0.8", "--t-final", "10", "--stride", "100"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["t", "lx", "ly", "lz", "H", "S", "k"]);
    let h = column(&header, &rows, "H");
    assert!(h.iter().all(|x| (x - 0.5).abs() <= 1e-8));
    let lx = column(&header, &rows, "lx");
    assert!((lx.last().unwrap() - 1.0).abs() <= 1e-5);
    assert!(lx.windows(2).all(|w| w[1] >= w[0]));
    let k = column(&header, &rows, "k");
    assert!(k.iter().all(|x| (x - 0.75).abs() <= 1e-6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max |dH|"));
}

#[test]
fn classical_fixed_point_is_stationary() {
    let out = run(&["classical-sim", "--init", "1,0,0", "--t-final", "1", "--stride", "250"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(r[1..], rows[0][1..]);
    }
    assert_eq!(column(&header, &rows, "lx")[0], 1.0);
}

#[test]
fn classical_rejects_bad_input() {
    assert_eq!(run(&["classical-sim", "--init", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["classical-sim", "--dt", "-0.1"]).status.code(), Some(2));
    assert_eq!(run(&["classical-sim", "--init", "0,3,4", "--dt", "10", "--t-final", "10"]).status.code(), Some(3));
}

#[test]
fn quantum_evolve_reaches_stationary_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let out = run(&[
        "quantum-evolve",
        "--init",
        "basis:00",
        "--t-final",
        "20",
        "--stride",
        "200",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout(&out);
    let residual: f64 = summary
        .lines()
        .find_map(|l| l.strip_prefix("residual: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual <= 1e-8, "{summary}");

    let (header, rows) = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["t", "lx_avg", "ly_avg", "lz_avg", "l2_avg", "trace", "min_eig"]);
    let lx = column(&header, &rows, "lx_avg");
    assert!(lx.windows(2).all(|w| w[1] >= w[0] - 1e-10));
    assert!(column(&header, &rows, "trace").iter().all(|t| (t - 1.0).abs() <= 1e-9));
    assert!(column(&header, &rows, "min_eig").iter().all(|&m| m >= -1e-8));
    let l2 = column(&header, &rows, "l2_avg");
    assert!(l2.iter().all(|x| (x - l2[0]).abs() <= 1e-8));
}

#[test]
fn quantum_evolve_reads_density_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.json");
    let out = run(&["stationary", "--a", "0.3", "--c", "0.2", "--out", rho.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = read_json(&rho);
    let init = dir.path().join("init.json");
    std::fs::write(&init, doc["rho"].to_string()).unwrap();

    let out = run(&["quantum-evolve", "--init", init.to_str().unwrap(), "--t-final", "0.5", "--stride", "100"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&stdout(&out));
    let lx = column(&header, &rows, "lx_avg");
    assert!(lx.iter().all(|x| (x - lx[0]).abs() <= 1e-12));
    assert_eq!(run(&["quantum-evolve", "--init", "basis:2"]).status.code(), Some(2));
}

#[test]
fn stationary_plus_plus_corner() {
    let out = run(&["stationary", "--a", "1", "--c", "0", "--format", "csv"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 16);
    assert!(column(&header, &rows, "re").iter().all(|&x| (x - 0.25).abs() <= 1e-15));
    assert!(column(&header, &rows, "im").iter().all(|&x| x == 0.0));
}

#[test]
fn stationary_rejects_invalid_params() {
    assert_eq!(run(&["stationary", "--a", "0.5", "--c", "0.6"]).status.code(), Some(2));
    assert_eq!(run(&["ppt", "--a", "1.5"]).status.code(), Some(2));
}

#[test]
fn ppt_singlet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ppt.json");
    let out = run(&["ppt", "--a", "0", "--c", "0", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = read_json(&path);
    assert!((doc["negativity"].as_f64().unwrap() - 0.5).abs() <= 1e-10);
    assert_eq!(doc["separable"], false);
    let cf: Vec<f64> = doc["closed_form_eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (x, y) in cf.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        assert!((x - y).abs() <= 1e-10);
    }
}

#[test]
fn sweep_marks_only_the_pure_product_corner_separable() {
    let out = run(&["sweep", "--grid", "11"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    let a = column(&header, &rows, "a");
    let k = header.iter().position(|h| h == "separable").unwrap();
    assert!(!rows.is_empty());
    for (ai, r) in a.iter().zip(&rows) {
        assert_eq!(r[k] == "true", *ai == 1.0, "a = {ai}");
    }
    assert_eq!(run(&["sweep", "--grid", "1"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--grid", "7", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"a": 0.0, "c": 0.0, "format": "csv"}"#).unwrap();
    let from_file = run(&["ppt", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success());
    let (header, rows) = csv_rows(&stdout(&from_file));
    assert!((column(&header, &rows, "pt_eigenvalue")[0] + 0.5).abs() <= 1e-10);

    let overridden = run(&["ppt", "--config", cfg.to_str().unwrap(), "--a", "1", "--format", "json"]);
    assert!(overridden.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(doc["a"], 1.0);
    assert_eq!(doc["separable"], true);

    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(run(&["ppt", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_passes_every_check() {
    let out = run(&["verify"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 13);
}
