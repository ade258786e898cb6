// SPDX-License-Identifier: MIT OR Apache-2.0

//! End-to-end runs of the `agehopf` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MODEL: [&str; 6] = ["--lambda", "0.6", "--mu", "0.2", "--eta", "0.81"];

fn agehopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agehopf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_model<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(MODEL);
    v.extend(extra);
    v
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(name: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema = read_json(&path);
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

#[test]
fn analyze_reports_the_caption_quantity() {
    let v = stdout_json(&agehopf(&with_model("analyze", &["--tau", "24"])));
    assert_schema("analysis", &v);
    let e_minus_c = v["caption"]["E-C"].as_f64().unwrap();
    assert!((e_minus_c - 0.0051).abs() < 5e-5, "{e_minus_c}");
    assert_eq!(v["assumptions"]["pass"], Value::Bool(true));
    assert!(v["profiles"]["beta_star"].as_f64().unwrap() > 2.6e10);
}

#[test]
fn a_alias_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("model.json");
    std::fs::write(&cfg, r#"{"A": 0.6, "mu": 0.2, "eta": 0.5, "k_max": 1}"#).unwrap();
    // The flag wins over the file.
    let v = stdout_json(&agehopf(&["hopf", "--config", cfg.to_str().unwrap(), "--eta", "0.81"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["params"]["eta"].as_f64(), Some(0.81));

    let alias = stdout_json(&agehopf(&["hopf", "--A", "0.6", "--mu", "0.2", "--eta", "0.81", "--k-max", "0"]));
    let tau0 = alias["points"][0]["tau_k"].as_f64().unwrap();
    assert!((tau0 - 23.228227013152964).abs() < 1e-9);
    assert_schema("hopf", &alias);

    std::fs::write(&cfg, "[1, 2]").unwrap();
    assert_eq!(code(&agehopf(&["hopf", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn exit_codes() {
    // Out-of-range and non-endemic parameters.
    assert_eq!(code(&agehopf(&["analyze", "--lambda", "0.6", "--mu", "1.2", "--eta", "0.5"])), 2);
    assert_eq!(code(&agehopf(&["analyze", "--lambda", "0.1", "--mu", "0.2", "--eta", "0.5"])), 2);
    // Missing value.
    assert_eq!(code(&agehopf(&["hopf", "--mu", "0.2", "--eta", "0.81"])), 2);
    assert_eq!(code(&agehopf(&with_model("simulate", &[]))), 2);
    // Assumptions fail: the report goes to stderr.
    let out = agehopf(&["hopf", "--lambda", "0.6", "--mu", "0.2", "--eta", "0.5"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("C-E"));
    assert_eq!(code(&agehopf(&["normal-form", "--lambda", "0.6", "--mu", "0.2", "--eta", "0.5"])), 3);
    // Grid mismatch in the simulator is a configuration error.
    assert_eq!(code(&agehopf(&with_model("simulate", &["--tau", "24", "--dt", "0.003"]))), 2);
    // Blow-up beyond the guard.
    let out = agehopf(&["simulate", "--lambda", "2e13", "--mu", "0.2", "--eta", "0.81", "--tau", "24", "--t-end", "1"]);
    assert_eq!(code(&out), 6, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn hopf_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = agehopf(&with_model("hopf", &["--format", "csv", "--out", path.to_str().unwrap()]));
        assert_eq!(code(&out), 0);
        std::fs::read(&path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,omega0,tau_k,branch,transversality,residual"));
    assert_eq!(lines.count(), 6);
    let manifest = read_json(&dir.path().join("a.csv.manifest.json"));
    assert_schema("manifest", &manifest);
    assert_eq!(manifest["command"], "hopf");
}

#[test]
fn normal_form_includes_a_reloadable_audit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nf.json");
    let out = agehopf(&with_model("normal-form", &["--out", path.to_str().unwrap()]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&path);
    assert_schema("normal_form", &v);
    assert_eq!(v["audit"]["pass"], Value::Bool(true));
    assert_eq!(v["result"]["classification"], "supercritical-stable");
    let a1 = v["result"]["A1"][0].as_f64().unwrap();
    assert!((a1 - 0.0031892195083645727).abs() < 1e-12);

    let out = agehopf(&["validate", "--audit-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));

    // A tampered record fails re-verification.
    let mut bad = v.clone();
    let scalars = bad["audit"]["mirrored"]["scalars"].as_array_mut().unwrap();
    let entry = scalars.iter_mut().find(|e| e[0] == "p_minus").unwrap();
    entry[1][0] = Value::from(entry[1][0].as_f64().unwrap() + 1e-3);
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = agehopf(&["validate", "--audit-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let published = stdout_json(&agehopf(&with_model("normal-form", &["--route", "published", "--k", "1"])));
    assert_eq!(published["result"]["route"], "published");
    assert_eq!(published["k"], 1);
}

#[test]
fn large_crossing_index_is_supported() {
    let v = stdout_json(&agehopf(&with_model("normal-form", &["--k", "99"])));
    let tau = v["result"]["tau_k"].as_f64().unwrap();
    assert!((tau - (23.228227013152964 + 99.0 * 2.0 * std::f64::consts::PI / 0.1236337094596143)).abs() < 1e-6);
}

#[test]
fn validate_suites_and_injected_perturbation() {
    let out = agehopf(&with_model("validate", &[]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    for suite in ["spectral", "transversality", "schemes", "audit"] {
        assert!(text.contains(&format!("PASS {suite}")), "{text}");
    }
    let out = agehopf(&with_model("validate", &["--suite", "audit", "--inject-perturbation", "1e-6"]));
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("FAIL audit") && text.contains("p_minus"), "{text}");
}

#[test]
fn simulate_verdicts_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = agehopf(&with_model(
        "simulate",
        &["--tau", "24", "--t-end", "600", "--stride", "10", "--out", csv.to_str().unwrap(), "--gnuplot"],
    ));
    let stdout = stdout_json(&out);
    let diag = read_json(&dir.path().join("traj.diagnostics.json"));
    assert_eq!(stdout, diag);
    assert_schema("diagnostics", &diag);
    assert_eq!(diag["verdict"], "sustained");
    let (ps, po) = (diag["period_scaled"].as_f64().unwrap(), diag["period_original"].as_f64().unwrap());
    assert!((po - 24.0 * ps).abs() < 1e-9);
    assert!(dir.path().join("traj.gp").exists());
    assert_schema("manifest", &read_json(&dir.path().join("traj.csv.manifest.json")));
    let header = std::fs::read_to_string(&csv).unwrap();
    assert!(header.starts_with("t,S,P,J,b\n"));

    let decaying = stdout_json(&agehopf(&with_model("simulate", &["--tau", "20", "--t-end", "600"])));
    assert_eq!(decaying["verdict"], "decaying");

    // Too short to classify.
    let short = stdout_json(&agehopf(&with_model("simulate", &["--tau", "24", "--t-end", "1"])));
    assert_eq!(short["verdict"], Value::Null);
}

#[test]
fn original_units_rescale_time_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let scaled = dir.path().join("s.csv");
    let orig = dir.path().join("o.csv");
    let surf = dir.path().join("surf.csv");
    let common = ["--tau", "24", "--scheme", "pde", "--t-end", "2", "--stride", "100"];
    let mut a = common.to_vec();
    a.extend(["--out", scaled.to_str().unwrap()]);
    assert_eq!(code(&agehopf(&with_model("simulate", &a))), 0);
    let mut b = common.to_vec();
    b.extend(["--out", orig.to_str().unwrap(), "--original-units", "--surface", surf.to_str().unwrap()]);
    assert_eq!(code(&agehopf(&with_model("simulate", &b))), 0);

    let parse = |p: &Path| -> Vec<Vec<f64>> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let (s, o) = (parse(&scaled), parse(&orig));
    assert_eq!(s.len(), o.len());
    for (s, o) in s.iter().zip(&o) {
        assert!((o[0] - 24.0 * s[0]).abs() < 1e-9);
        assert_eq!(o[1], s[1]);
        assert!((o[4] - s[4] / 24.0).abs() < 1e-12);
    }
    let surface = parse(&surf);
    assert!(!surface.is_empty() && surface.iter().all(|r| r.len() == 3 && r[2] >= 0.0));
    // Ages in original units reach past the delay tau = 24.
    assert!(surface.iter().any(|r| r[1] > 24.0));

    // The surface is only available from the characteristic scheme.
    let out = agehopf(&with_model("simulate", &["--tau", "24", "--surface", surf.to_str().unwrap()]));
    assert_eq!(code(&out), 2);
}

#[test]
fn figure_panels_close_their_loop() {
    let dir = tempfile::tempdir().unwrap();
    let out = agehopf(&["reproduce-figure1", "--outdir", dir.path().to_str().unwrap(), "--t-end", "1000"]);
    let summary = stdout_json(&out);
    assert_schema("summary", &summary);
    assert_eq!(summary, read_json(&dir.path().join("summary.json")));
    assert_eq!(summary["verdict"], "sustained");
    assert!(summary["loop_closure"]["relative"].as_f64().unwrap() < 0.01);
    assert!((summary["tau0"].as_f64().unwrap() - 23.228227013152964).abs() < 1e-9);
    for (file, header) in [
        ("panel_a_S.csv", "t,S"),
        ("panel_b_P.csv", "t,P"),
        ("panel_c_phase.csv", "P,S"),
        ("panel_d_surface.csv", "t,a,i"),
    ] {
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(text.lines().next(), Some(header));
        assert!(text.lines().count() > 100, "{file}");
        assert!(dir.path().join(format!("{file}.manifest.json")).exists());
    }
}
