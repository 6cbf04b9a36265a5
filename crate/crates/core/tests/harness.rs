use std::fs;

use fastshock::analysis::NKind;
use fastshock::harness::run::{run_experiment_with, VerdictStatus};
use fastshock::harness::suite::{run_suite, SuiteOptions};
use fastshock::harness::{load_config, parse_config, ExperimentConfig, InitialSpec};
use fastshock::solver::Grid1D;
use fastshock::{Error, Exec};

fn coarse(json: &str) -> ExperimentConfig {
    parse_config(json).unwrap()
}

#[test]
fn config_files_load_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex1.json");
    fs::write(&path, r#"{"example": 1, "m": 0.5}"#).unwrap();
    let c = load_config(&path).unwrap();
    assert_eq!(c.model.terms(), vec![(1.0, 2.0)]);
    assert_eq!((c.model.mu(), c.model.u_minus()), (1.0, 1.0));
    assert_eq!(c.initial, InitialSpec::Example(1));

    fs::write(&path, r#"{"example": 3, "m": 0.3}"#).unwrap();
    match load_config(&path) {
        Err(Error::Validation { path, .. }) => assert_eq!(path, "m"),
        other => panic!("{other:?}"),
    }
    fs::write(&path, r#"{"example": 4}"#).unwrap();
    assert_eq!(load_config(&path).unwrap().model.m(), 0.5);
    fs::write(&path, "not json").unwrap();
    assert!(matches!(load_config(&path), Err(Error::Parse(_))));
    assert!(matches!(
        load_config(&dir.path().join("missing.json")),
        Err(Error::Io(_))
    ));
}

#[test]
fn run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = coarse(
        r#"{"example":1,"m":0.5,"grid":{"x_left":-20,"x_right":60,"n_cells":400},"t_end":2,"cadence":0.5}"#,
    );
    c.out_dir = Some(dir.path().to_path_buf());
    let r = run_experiment_with(&c, Exec::Sequential).unwrap();
    for name in [
        "snapshots.csv",
        "diagnostics.csv",
        "profile.csv",
        "overlay.svg",
        "error.svg",
        "run_meta.json",
        "report.json",
    ] {
        assert!(r.files.contains(&dir.path().join(name)), "{name} missing");
    }
    let diag = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,sup_error,N,mass,max_slope,"));
    assert_eq!(diag.lines().count(), 1 + 5);
    let snaps = fs::read_to_string(dir.path().join("snapshots.csv")).unwrap();
    assert!(snaps.starts_with("t,x,u\n"));
    assert_eq!(snaps.lines().count(), 1 + 5 * 400);
    let profile = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert!(profile.starts_with("xi,U,U_xi\n"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(
        report["verdicts"].as_array().unwrap().len(),
        r.verdicts.len()
    );

    assert_eq!(r.verdict("decay_fit").unwrap().status, VerdictStatus::Pass);
    assert_eq!(
        r.verdict("tracking").unwrap().status,
        VerdictStatus::Skipped
    );
    assert!(r.passed());
    let times: Vec<f64> = r.diagnostics.records().iter().map(|x| x.t).collect();
    assert_eq!(times, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let json = r#"{"example":2,"m":0.2,"grid":{"x_left":-10,"x_right":40,"n_cells":200},"t_end":0.5,"cadence":0.25}"#;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut reports = Vec::new();
    for dir in [&a, &b] {
        let mut c = coarse(json);
        c.out_dir = Some(dir.path().to_path_buf());
        reports.push(run_experiment_with(&c, Exec::Sequential).unwrap());
    }
    assert_eq!(reports[0].verdicts, reports[1].verdicts);
    for name in [
        "snapshots.csv",
        "diagnostics.csv",
        "profile.csv",
        "overlay.svg",
        "error.svg",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn degenerate_example_reports_weighted_functional() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = coarse(
        r#"{"example":4,"grid":{"x_left":-20,"x_right":60,"n_cells":200},"t_end":0.5,"cadence":0.5}"#,
    );
    c.out_dir = Some(dir.path().to_path_buf());
    let r = run_experiment_with(&c, Exec::Sequential).unwrap();
    assert_eq!(r.summary.n_kind, NKind::N2);
    assert_eq!(
        r.verdict("k_convexity").unwrap().status,
        VerdictStatus::Skipped
    );
    assert_eq!(r.shift.dropped.len(), 1);
    let diag = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    let row = diag.lines().nth(1).unwrap();
    assert!(row.contains(",N2,w,"));
}

#[test]
fn profile_data_tracks_the_wave_on_a_coarse_grid() {
    let c = coarse(
        r#"{"example":1,"m":0.5,"initial":"profile","grid":{"x_left":-20,"x_right":60,"n_cells":400},"t_end":2,"cadence":1}"#,
    );
    let r = run_experiment_with(&c, Exec::Sequential).unwrap();
    assert_eq!(r.verdict("tracking").unwrap().status, VerdictStatus::Pass);
    assert_eq!(
        r.verdict("sup_error_decay").unwrap().status,
        VerdictStatus::Skipped
    );
    assert!(r.shift.x0.abs() < 1e-8);
}

fn small_suite() -> SuiteOptions {
    SuiteOptions {
        grid: Some(Grid1D::new(-20.0, 60.0, 200).unwrap()),
        t_end: Some(5.0),
        cadence: Some(1.0),
        ..SuiteOptions::default()
    }
}

#[test]
fn suite_computes_the_steepening_verdict() {
    let r = run_suite(&[1], None, &small_suite()).unwrap();
    assert_eq!(r.entries.len(), 4);
    let v = &r.cross_checks[0];
    assert_eq!(v.criterion, "steepening");
    assert_ne!(v.status, VerdictStatus::Skipped, "{}", v.detail);
}

#[test]
fn suite_over_example_three_and_isolation() {
    let dir = tempfile::tempdir().unwrap();
    let opts = SuiteOptions {
        t_end: Some(0.2),
        out_dir: Some(dir.path().to_path_buf()),
        ..small_suite()
    };
    let r = run_suite(&[3], None, &opts).unwrap();
    let ms: Vec<f64> = r.entries.iter().map(|e| e.m).collect();
    assert_eq!(ms, vec![0.6, 0.8, 0.9]);
    assert!(r.entries.iter().all(|e| e.report.is_some()));
    assert!(dir.path().join("suite_report.json").exists());

    let r = run_suite(&[1, 3], Some(&[0.3]), &opts).unwrap();
    assert!(r.entries[0].report.is_some());
    assert!(r.entries[1].error.as_deref().unwrap().contains("m"));
    assert!(!r.passed());
    assert!(dir.path().join("ex1_m0.3").join("report.json").exists());

    assert!(matches!(run_suite(&[], None, &opts), Err(Error::Usage(_))));
}
