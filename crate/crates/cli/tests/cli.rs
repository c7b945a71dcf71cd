use std::f64::consts::FRAC_PI_2;
use std::process::{Command, Output};

use serde_json::Value;

fn csym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csym")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = csym(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entry(v: &Value, i: usize, j: usize) -> (f64, f64) {
    let e = &v[i][j];
    (e[0].as_f64().unwrap(), e[1].as_f64().unwrap())
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "--q=-0.6", "--phi", "0", "--gamma", "1"]);
    assert_eq!(v["class"], "c_symmetric");
    assert!((v["theta"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["omega"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    for key in ["in_upsilon", "d1", "d2"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json(&["classify", "--q", "0", "--r", "1"])["class"], "self_adjoint");
    assert_eq!(json(&["classify", "--r", "0"])["class"], "non_real_spectrum");
}

#[test]
fn classify_in_degrees() {
    let v = json(&["classify", "--q", "0", "--phi", "90", "--degrees"]);
    assert_eq!(v["in_upsilon"], true);
}

#[test]
fn build_c_examples() {
    let v = json(&["build-c", "--theta", "1", "--omega", "0.4"]);
    let diag = [1.0, -1.0, 1.0, -1.0];
    for i in 0..4 {
        for j in 0..4 {
            let (re, im) = entry(&v["c"], i, j);
            let want = if i == j { diag[i] } else { 0.0 };
            assert!((re - want).abs() < 1e-15 && im.abs() < 1e-15);
        }
    }
    let v = json(&["build-c", "--theta", "2", "--omega", "1.1"]);
    assert!((v["norm"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    for (k, r) in v["residuals"].as_object().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-12, "{k} = {r}");
    }
    assert_eq!(csym(&["build-c", "--theta", "0"]).status.code(), Some(2));
    assert_eq!(csym(&["build-c", "--theta", "-1"]).status.code(), Some(2));
}

#[test]
fn t_matrix_examples() {
    let v = json(&["t-matrix", "--theta", "1", "--phi", "0", "--xi", "0"]);
    for key in ["closed_form", "boundary_solve"] {
        for (i, j) in [(0, 1), (1, 0)] {
            let (re, im) = entry(&v[key], i, j);
            assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        }
    }
    let v = json(&["t-matrix", "--theta", "3", "--omega", "0.7", "--phi", "0.4", "--xi", "2.2"]);
    assert!(v["max_difference"].as_f64().unwrap() < 1e-10);
    let (a, b) = (entry(&v["closed_form"], 0, 1), entry(&v["closed_form"], 1, 0));
    assert!((b.0 + a.0).abs() < 1e-12 && (b.1 - a.1).abs() < 1e-12);
}

#[test]
fn singular_coupling_is_a_numeric_failure() {
    // θ = 1, φ = 0: Δ = 1 + cos ξ + sin ξ vanishes at ξ = π.
    let xi = std::f64::consts::PI.to_string();
    let out = csym(&["t-matrix", "--theta", "1", "--phi", "0", "--xi", &xi]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn spectrum_references() {
    let half_pi = FRAC_PI_2.to_string();
    let v = json(&["spectrum", "--model", "schrodinger", "--q", "0", "--r", "1", "--phi", &half_pi, "--xi", "0"]);
    assert_eq!(v["discrete"].as_array().unwrap().len(), 0);
    assert_eq!(v["essential"][0], "[0,inf)");
    let v = json(&["spectrum", "--model", "dirac", "--c", "2", "--q", "0", "--phi", &half_pi, "--xi", &half_pi]);
    assert_eq!(v["discrete"].as_array().unwrap().len(), 0);
    assert_eq!(v["gap"][0].as_f64(), Some(-2.0));
    assert_eq!(v["gap"][1].as_f64(), Some(2.0));
    assert_eq!(csym(&["spectrum", "--model", "abstract", "--theta", "2"]).status.code(), Some(2));
}

#[test]
fn spectrum_with_bound_states() {
    let v = json(&["spectrum", "--theta", "2", "--omega", "0", "--phi", "0", "--xi", "0"]);
    let d = v["discrete"].as_array().unwrap();
    assert!(!d.is_empty());
    assert!(d.iter().all(|e| e["z"].as_f64().unwrap() < 0.0));
}

#[test]
fn omega_sweep_gives_constant_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let p = path.to_str().unwrap();
    let out = csym(&[
        "spectrum", "--theta", "2", "--phi", "0.3", "--xi", "0.2", "--sweep", "omega", "--from", "0", "--to", "6",
        "--steps", "5", "--csv", p,
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sweep_param,eigenvalue_index,z"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[2] == rows[0][2]));
    let digits = rows[0][2].chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    assert_eq!(digits.trim_start_matches('0').len(), 15);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"model": "schrodinger", "params": {"theta": 2, "omega": 0.3}, "tol": 1e-12}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["build-c", "--config", p]);
    assert_eq!(v["omega"].as_f64(), Some(0.3));
    let v = json(&["build-c", "--config", p, "--omega", "0.5"]);
    assert_eq!(v["omega"].as_f64(), Some(0.5));

    std::fs::write(&path, r#"{"params": {"theta": 2}, "colour": "red"}"#).unwrap();
    let out = csym(&["build-c", "--config", p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    std::fs::write(&path, r#"{"params": {"theta": 2}, "u": {"q": 0.1}}"#).unwrap();
    assert_eq!(csym(&["classify", "--config", p]).status.code(), Some(2));
}

#[test]
fn resolvent_runs() {
    let v = json(&["resolvent", "--theta", "2", "--omega", "0.3", "--phi", "0.4", "--xi", "1.1", "--grid-n", "2000"]);
    assert!(v["boundary_condition_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["discrete_relative_difference"].as_f64().unwrap() < 1e-3);
    assert_eq!(v["samples"].as_array().unwrap().len(), 4000);
}

#[test]
fn verify_passes_and_detects_faults() {
    let v = json(&["verify"]);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true && c.get("residual").is_some()));

    let out = csym(&["verify", "--inject-fault", "t_matrix"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL t_matrix")));
    assert!(text.lines().filter(|l| l.starts_with("FAIL")).count() == 1);

    assert_eq!(csym(&["verify", "--inject-fault", "nothing"]).status.code(), Some(2));
}
