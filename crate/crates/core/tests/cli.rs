use std::path::Path;
use std::process::{Command, Output};

use fracbeam::dataset::{DatasetFamily, SampleRecord};
use fracbeam::fem::{solve_transverse, SolverOptions};
use fracbeam::model::{BeamModel, VoProfile};

fn fracbeam(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracbeam"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run fracbeam")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn printed_max_w(o: &Output) -> f64 {
    let text = stdout(o);
    let line = text
        .lines()
        .find(|l| l.starts_with("max_w0 = "))
        .expect("max_w0 line");
    line["max_w0 = ".len()..]
        .trim_end_matches(" m")
        .parse()
        .unwrap()
}

#[test]
fn solve_default_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracbeam(&["solve", "--out", "sol.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sol.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,u0,w0,theta0"));
    assert_eq!(lines.count(), 201);
    let res = std::fs::read_to_string(dir.path().join("sol.resultants.csv")).unwrap();
    assert_eq!(res.lines().next(), Some("x_g,alpha,N,M"));
    assert_eq!(res.lines().count(), 801);
    assert!(printed_max_w(&o) > 0.0);
}

#[test]
fn solve_local_config_prints_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"vo": {"family": "constant", "params": {"value": 1.0}}, "output": {"path": "local.csv", "format": "csv"}}"#,
    )
    .unwrap();
    let o = fracbeam(&["solve", "--config", "c.json"], dir.path());
    assert!(o.status.success());
    let w = printed_max_w(&o);
    assert!((w - 6.5104e-3).abs() <= 5e-3 * 6.5104e-3, "{w}");
    assert!(dir.path().join("local.csv").exists());
}

#[test]
fn invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ \"material\": ").unwrap();
    let o = fracbeam(&["solve", "--config", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    std::fs::write(
        dir.path().join("neg.json"),
        r#"{"material": {"E": -1, "nu": 0.3}}"#,
    )
    .unwrap();
    let o = fracbeam(&["solve", "--config", "neg.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("material.E"));

    std::fs::write(
        dir.path().join("sin.json"),
        r#"{"vo": {"family": "sinusoidal", "params": {"b0": 0.95, "b1": 0.0, "b2": 0.0}}}"#,
    )
    .unwrap();
    let o = fracbeam(&["solve", "--config", "sin.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("profile-validity"));
}

#[test]
fn dataset_writes_four_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracbeam(
        &[
            "dataset",
            "--n",
            "1",
            "--seed",
            "7",
            "--out",
            "out.ndjson",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("out.ndjson")).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(dir.path().join("out.manifest.json").exists());

    let o = fracbeam(
        &[
            "export",
            "--dataset",
            "out.ndjson",
            "--id",
            "0",
            "--out",
            "r0.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r0.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,w0,theta0,alpha"));
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn export_then_invert_constant_record() {
    let dir = tempfile::tempdir().unwrap();
    let profile = VoProfile::Linear { a0: 0.9, a1: 0.9 };
    let model = BeamModel::benchmark(profile).unwrap();
    let r = solve_transverse(&model, &SolverOptions::default()).unwrap();
    let record = SampleRecord {
        id: 0,
        family: DatasetFamily::Linear,
        params: serde_json::json!({"a0": 0.9, "a1": 0.9}),
        alpha: vec![0.9; r.x.len()],
        x: r.x,
        w: r.w0,
        theta: r.theta0,
    };
    std::fs::write(
        dir.path().join("c.ndjson"),
        serde_json::to_string(&record).unwrap() + "\n",
    )
    .unwrap();
    let o = fracbeam(
        &[
            "export",
            "--dataset",
            "c.ndjson",
            "--id",
            "0",
            "--out",
            "obs.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = fracbeam(
        &["invert", "--obs", "obs.csv", "--out", "inv.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let er = report["mean_abs_er_percent"].as_f64().unwrap();
    assert!(er <= 1.0, "{er}");
    assert_eq!(report["alpha"].as_array().unwrap().len(), 201);
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("inv.json")).unwrap())
            .unwrap();
    assert_eq!(saved, report);
}

#[test]
fn invert_needs_observations() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracbeam(&["invert"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_clean_and_with_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracbeam(&["verify"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 9);
    let pd = checks
        .iter()
        .find(|c| c["name"] == "positive_definiteness")
        .unwrap();
    assert!(pd["measured"].as_f64().unwrap() > 0.0);

    let o = fracbeam(&["verify", "--kernel-scale", "1.05"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let status = |name: &str| {
        report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()["passed"]
            .as_bool()
            .unwrap()
    };
    assert!(status("self_adjointness"));
    assert!(status("symmetry"));
    assert!(!status("local_limit_deflection"));
}
