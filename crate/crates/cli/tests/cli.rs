use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use brbm_cli::{execute, CliError, Experiment, ExperimentConfig, RawRecord};
use brbm_core::analytics::quantile_estimate;

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

/// Every column but `wall_time`.
fn statistical_columns(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().clone();
    let keep: Vec<usize> = (0..headers.len()).filter(|&i| &headers[i] != "wall_time").collect();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            keep.iter().map(|&i| rec[i].to_string()).collect()
        })
        .collect()
}

fn rows(path: &Path) -> Vec<(String, String, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[1].to_string(), rec[2].to_string(), rec[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"horizons": [4, 6, 7, 8], "replicates": 40, "seed": 11}"#;
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    execute(Experiment::Frontier, config(json), None, Some(a.clone())).unwrap();
    execute(Experiment::Frontier, config(json), None, Some(b.clone())).unwrap();
    let ta = statistical_columns(&a);
    assert!(!ta.is_empty());
    assert_eq!(ta, statistical_columns(&b));
    let header = std::fs::read_to_string(&a).unwrap();
    assert!(header.starts_with("experiment,params,statistic,value,std_error,n,wall_time\n"));
}

#[test]
fn seed_override_changes_the_draws() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"horizons": [5], "replicates": 100, "seed": 11}"#;
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    execute(Experiment::Dependence, config(json), None, Some(a.clone())).unwrap();
    execute(Experiment::Dependence, config(json), Some(12), Some(b.clone())).unwrap();
    assert_ne!(statistical_columns(&a), statistical_columns(&b));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["seed"], 12);
    assert_eq!(sidecar["status"], "complete");
}

#[test]
fn parallel_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    for (exp, json) in [
        (Experiment::Frontier, r#"{"horizons": [3, 4, 5, 6], "replicates": 60, "seed": 5}"#),
        (Experiment::Dependence, r#"{"horizons": [3, 5], "replicates": 120, "seed": 5}"#),
        (Experiment::Barrier, r#"{"horizons": [2], "y_offsets": [0, 1], "replicates": 30, "seed": 5}"#),
        (Experiment::Watanabe, r#"{"horizons": [4, 6], "replicates": 40, "seed": 5}"#),
    ] {
        let serial = dir.path().join(format!("{}-s.csv", exp.name()));
        let parallel = dir.path().join(format!("{}-p.csv", exp.name()));
        let mut cfg = config(json);
        execute(exp, cfg.clone(), None, Some(serial.clone())).unwrap();
        cfg.parallel = true;
        execute(exp, cfg, None, Some(parallel.clone())).unwrap();
        assert_eq!(statistical_columns(&serial), statistical_columns(&parallel), "{}", exp.name());
    }
}

#[test]
fn rows_are_recomputable_from_raw_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let json = r#"{"horizons": [2, 3.5], "replicates": 25, "seed": 9, "export_raw": true}"#;
    execute(Experiment::Frontier, config(json), None, Some(out.clone())).unwrap();
    let mut reader = csv::Reader::from_path(dir.path().join("f.raw.csv")).unwrap();
    let records: Vec<RawRecord> = reader.deserialize().map(|r| r.unwrap()).collect();

    // particles alive at a horizon are the segments that end there
    let mut max: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut refl: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.split_time == r.horizon) {
        let key = (r.horizon.to_bits(), r.replicate_id);
        let m = max.entry(key).or_insert(f64::NEG_INFINITY);
        *m = m.max(r.endpoint_position);
        let a = refl.entry(key).or_insert(f64::NEG_INFINITY);
        *a = a.max(r.endpoint_position.abs());
    }
    let table = rows(&out);
    for t in [2.0f64, 3.5] {
        for (stat, per_rep) in [("quantile_max", &max), ("quantile_max_reflected", &refl)] {
            let sample: Vec<f64> = per_rep.iter().filter(|(k, _)| k.0 == t.to_bits()).map(|(_, v)| *v).collect();
            assert_eq!(sample.len(), 25);
            let q = quantile_estimate(&sample, 0.5, t).unwrap();
            let row = table.iter().find(|r| r.0 == format!("t={t}") && r.1 == stat).unwrap();
            assert_eq!(row.2, q.value, "{stat} at t = {t}");
        }
    }
}

#[test]
fn minimal_displacement_is_recomputable_too() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let json = r#"{"horizons": [3], "replicates": 20, "seed": 2, "export_raw": true}"#;
    execute(Experiment::Minimal, config(json), None, Some(out.clone())).unwrap();
    let mut reader = csv::Reader::from_path(dir.path().join("m.raw.csv")).unwrap();
    let mut min: BTreeMap<u64, f64> = BTreeMap::new();
    for r in reader.deserialize::<RawRecord>().map(|r| r.unwrap()).filter(|r| r.split_time == r.horizon) {
        let m = min.entry(r.replicate_id).or_insert(f64::INFINITY);
        *m = m.min(r.endpoint_position.abs());
    }
    let sample: Vec<f64> = min.into_values().collect();
    let q = quantile_estimate(&sample, 0.5, 3.0).unwrap();
    assert_eq!(rows(&out)[0].2, q.value);
}

#[test]
fn every_experiment_runs_on_a_small_config() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        (Experiment::Frontier, r#"{"horizons": [2, 3, 4, 5], "replicates": 20}"#),
        (Experiment::Dependence, r#"{"horizons": [3], "replicates": 100}"#),
        (Experiment::Barrier, r#"{"horizons": [2], "y_offsets": [0], "replicates": 10}"#),
        (Experiment::Abundo, r#"{"horizons": [8, 20], "y_offsets": [0, 1, 2]}"#),
        (Experiment::Watanabe, r#"{"horizons": [3, 5], "replicates": 30}"#),
        (Experiment::Minimal, r#"{"horizons": [2, 4], "replicates": 30}"#),
        (Experiment::PdeFront, r#"{"horizons": [2, 4], "grid": {"dx": 0.1}}"#),
        (Experiment::Renewal, r#"{"horizons": [1, 2], "y_offsets": [0, 1], "x_shift": 3, "grid": {"dx": 0.05, "store_every": 0.05}}"#),
        (Experiment::Profile, r#"{"horizons": [2, 3], "y_offsets": [0, 1], "x_max": 10, "grid": {"dx": 0.1}}"#),
    ];
    for (exp, json) in configs {
        let out = dir.path().join(format!("{}.csv", exp.name()));
        let report = execute(exp, config(json), None, Some(out.clone())).unwrap();
        assert!(!report.rows.is_empty(), "{}", exp.name());
        assert_eq!(rows(&out).len(), report.rows.len());
        assert!(report.rows.iter().all(|r| r.experiment == exp.name()));
    }
}

#[test]
fn frontier_rows_carry_fit_and_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    execute(
        Experiment::Frontier,
        config(r#"{"horizons": [3, 4, 5, 6], "replicates": 30}"#),
        None,
        Some(out.clone()),
    )
    .unwrap();
    let table = rows(&out);
    for stat in ["fit_speed", "fit_log_coeff", "fit_intercept", "fit_residual_rms", "overlay_liminf", "overlay_limsup"] {
        assert!(table.iter().any(|r| r.1 == stat), "{stat}");
    }
    let lim = |stat: &str| table.iter().find(|r| r.0 == "t=6" && r.1 == stat).unwrap().2;
    assert!(lim("overlay_limsup") > lim("overlay_liminf"));
}

#[test]
fn validation_lists_every_offending_field() {
    let mut cfg = config(r#"{"horizons": [6, 4], "replicates": 0, "level": 1.5, "dt_path": 0}"#);
    let err = cfg.validate(Experiment::Frontier).unwrap_err();
    let CliError::Validation(fields) = &err else { panic!("{err:?}") };
    for key in ["horizons", "replicates", "level", "dt_path"] {
        assert!(fields.iter().any(|f| f.starts_with(key)), "{key} missing from {fields:?}");
    }
    assert_eq!(err.exit_code(), 2);

    let mut cfg = config(r#"{"experiment": "minimal", "horizons": [4]}"#);
    assert!(cfg.validate(Experiment::Frontier).is_err());
    let mut cfg = config(r#"{"horizons": [4]}"#);
    assert!(cfg.validate(Experiment::Watanabe).is_err());
    let mut cfg = config(r#"{"horizons": [14]}"#);
    assert!(cfg.validate(Experiment::Minimal).is_err());
}

#[test]
fn unknown_keys_are_rejected() {
    let err = ExperimentConfig::from_json(r#"{"horizons": [4], "replicate": 10}"#).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("replicate"));
    assert!(ExperimentConfig::from_json(r#"{"horizons": [4], "grid": {"dz": 0.1}}"#).is_err());
}

#[test]
fn exit_codes_follow_the_error_class() {
    use brbm_core::Error as E;
    let run = |error| CliError::Run { error, rows: 0 }.exit_code();
    assert_eq!(run(E::Guard { guard: 1 }), 3);
    assert_eq!(run(E::Numerical("x".into())), 4);
    assert_eq!(run(E::Stability("x".into())), 4);
    assert_eq!(run(E::FrontAtEdge { time: 1.0, edge: "upper" }), 4);
    assert_eq!(run(E::Domain("x".into())), 2);
}

fn brbm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_brbm")).args(args).output().unwrap()
}

#[test]
fn binary_lists_experiments() {
    let out = brbm(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for e in Experiment::ALL {
        assert!(text.contains(e.name()));
    }
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let out_path = dir.path().join("out.csv");
    let out = out_path.to_str().unwrap();

    let ok = write("ok.json", r#"{"horizons": [2, 3], "replicates": 20}"#);
    assert_eq!(brbm(&["minimal", "--config", &ok, "--out", out]).status.code(), Some(0));
    assert!(out_path.exists());

    let bad = write("bad.json", r#"{"horizons": [3, 2], "bogus": 1}"#);
    assert_eq!(brbm(&["minimal", "--config", &bad, "--out", out]).status.code(), Some(2));
    assert_eq!(brbm(&["minimal"]).status.code(), Some(2));
    assert_eq!(brbm(&["nonsense", "--config", &ok]).status.code(), Some(2));

    let guard_path = dir.path().join("guard.csv");
    let guard = write("guard-config.json", r#"{"horizons": [8], "replicates": 20, "guard": 50}"#);
    let res = brbm(&["minimal", "--config", &guard, "--out", guard_path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    let sidecar = std::fs::read_to_string(dir.path().join("guard.json")).unwrap();
    assert!(sidecar.contains("partial"), "{sidecar}");
}
