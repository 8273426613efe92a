use std::process::{Command, Output};

use serde_json::Value;

fn thc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = thc(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(text: &[u8]) -> Vec<Vec<String>> {
    String::from_utf8_lossy(text)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn classification(le: &str, r: &str) -> String {
    let doc = json(&["classify", "--le", le, "--lc", "1", "--R", r]);
    doc["transition"]["classification"].as_str().unwrap().to_string()
}

#[test]
fn classify_small_lewis_switches_type() {
    assert_eq!(classification("0.01", "620"), "TypeI");
    assert_eq!(classification("0.01", "660"), "TypeII");
}

#[test]
fn classify_large_lewis_stays_type_one() {
    assert_eq!(classification("2", "300"), "TypeI");
}

#[test]
fn classify_document_has_schema_and_terms() {
    let doc = json(&["classify", "--le", "0.01", "--lc", "1", "--R", "620"]);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "classify");
    let q = doc["transition"]["q"].as_f64().unwrap();
    assert!((q - 42.3186).abs() < 1e-3, "q = {q}");
    let terms = doc["transition"]["d_terms"].as_array().unwrap();
    let sum: f64 = terms.iter().map(|t| t["value"].as_f64().unwrap()).sum();
    assert!((sum - q).abs() < 1e-9 * q.abs());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["qsweep", "--le", "0.1", "--lc", "2", "--rmin", "550", "--rmax", "600", "--steps", "11"];
    assert_eq!(thc(&args).stdout, thc(&args).stdout);
    let sim = ["simulate", "--le", "0.5", "--lc", "2", "--R", "700", "--sigma-offset", "0.2", "--seed", "9"];
    assert_eq!(thc(&sim).stdout, thc(&sim).stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = thc(&["classify", "--le", "0.5", "--lc", "1", "--R", "700", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("classification,TypeI"));
}

#[test]
fn missing_aspect_is_domain_error() {
    let out = thc(&["classify", "--le", "0.5", "--R", "700"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oscillatory_regime_has_no_transition_number() {
    let doc = json(&["classify", "--le", "0.5", "--lc", "1", "--R", "1500"]);
    assert_eq!(doc["regime"]["regime"], "Oscillatory");
    assert!(doc["transition"].is_null());
    let sim = thc(&["simulate", "--le", "0.5", "--lc", "1", "--R", "1500"]);
    assert_eq!(sim.status.code(), Some(2));
}

#[test]
fn unsupported_table_is_rejected() {
    assert_eq!(thc(&["tables", "--table", "5"]).status.code(), Some(2));
}

#[test]
fn threshold_tables_reproduce() {
    let out = thc(&["tables", "--table", "3", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out.stdout);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.last().unwrap() == "1"));
}

#[test]
fn qsweep_matches_reference_curve() {
    let out = thc(&["qsweep", "--le", "0.01", "--lc", "1", "--rmin", "600", "--rmax", "660", "--steps", "31"]);
    assert!(out.status.success());
    let rows = csv_rows(&out.stdout);
    let curve = thermohaline::reference::CURVES
        .iter()
        .find(|c| c.lc == 1 && c.le == 0.01)
        .expect("reference curve");
    let mut compared = 0;
    for row in &rows {
        let r: f64 = row[0].parse().unwrap();
        let q: f64 = row[1].parse().unwrap();
        if let Some(&(_, want)) = curve.points.iter().find(|(pr, _)| (pr - r).abs() < 1e-9) {
            assert!((q - want).abs() <= 1e-3 * want.abs(), "R = {r}: {q} vs {want}");
            compared += 1;
        }
    }
    assert!(compared >= 10, "only {compared} points overlap the reference");
}

#[test]
fn qsweep_drops_points_outside_steady_regime() {
    let out = thc(&["qsweep", "--le", "0.01", "--lc", "1", "--rmin", "600", "--rmax", "700", "--steps", "11"]);
    let rows = csv_rows(&out.stdout);
    assert!(rows.iter().all(|r| r[0].parse::<f64>().unwrap() < 665.04));
    let none = thc(&["qsweep", "--le", "0.01", "--lc", "1", "--rmin", "680", "--rmax", "700", "--steps", "3"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn qsweep_rejects_empty_range() {
    let out = thc(&["qsweep", "--le", "0.1", "--lc", "1", "--rmin", "600", "--rmax", "600"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn harmonics_check_passes_and_caps_degree() {
    let doc = json(&["harmonics-check", "--max-degree", "4"]);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["triples"], 15625);
    assert!(doc["max_deviation"].as_f64().unwrap() < 1e-12);
    assert_eq!(thc(&["harmonics-check", "--max-degree", "20"]).status.code(), Some(2));
}

#[test]
fn simulate_type_one_converges() {
    let out = thc(&["simulate", "--le", "0.5", "--lc", "1", "--R", "700", "--sigma-offset", "0.5", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("t,x-1_re,x-1_im,x0_re,x0_im,x1_re,x1_im,norm_sq\n"));
    let report: Value = serde_json::from_slice(&out.stderr).unwrap();
    let dev = report["rel_deviation"].as_f64().unwrap();
    assert!(dev < 1e-4);
}

#[test]
fn simulate_type_two_diverges() {
    let out = thc(&["simulate", "--le", "0.01", "--lc", "1", "--R", "660", "--x0-norm-sq", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_critical_mode_is_neutral() {
    let doc = json(&["spectrum", "--le", "0.5", "--lc", "1", "--R", "700", "--l", "1", "--n", "1"]);
    let betas = doc["betas"].as_array().unwrap();
    assert_eq!(betas.len(), 3);
    assert!(betas[0]["re"].as_f64().unwrap().abs() < 1e-9);
    assert!(betas[1]["re"].as_f64().unwrap() < 0.0);
}
