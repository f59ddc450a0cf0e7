//! End-to-end tests of the `weakmeas` binary: config handling, output
//! formats, exit codes, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use weakmeas::config::{ExperimentConfig, ExperimentKind};
use weakmeas::report;

fn weakmeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakmeas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn default_run_emits_parseable_json() {
    let out = weakmeas(&["repeat", "--realizations", "8", "--steps", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc.config.experiment, ExperimentKind::Repeat);
    assert_eq!(doc.config.realizations, 8);
}

#[test]
fn csv_format_uses_documented_header() {
    let out = weakmeas(&[
        "repeat",
        "--realizations",
        "4",
        "--steps",
        "10",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("realization,step,outcome,y_running,fidelity_to_initial\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 10);
}

#[test]
fn config_file_plus_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default_for(ExperimentKind::Repeat);
    cfg.realizations = 6;
    cfg.m_steps = 10;
    cfg.seed = 5;
    let path = write_config(dir.path(), &cfg);

    let out = weakmeas(&["repeat", "--config", &path, "--seed", "9"]);
    assert!(out.status.success());
    let doc = report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc.config.seed, 9, "flag overrides the file value");
    assert_eq!(doc.config.realizations, 6, "file value survives");
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("results").join("doc.json");
    let out = weakmeas(&[
        "repeat",
        "--realizations",
        "4",
        "--steps",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc = report::parse_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(
        doc.config.output_path.as_deref(),
        Some(out_path.to_str().unwrap())
    );
}

#[test]
fn invalid_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default_for(ExperimentKind::Repeat);
    cfg.delta_p = -1.0;
    let path = write_config(dir.path(), &cfg);
    let out = weakmeas(&["repeat", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta_p"));
}

#[test]
fn unknown_config_field_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(
        &path,
        r#"{
            "experiment": "repeat",
            "state": [[0.6, 0.0], [0.8, 0.0]],
            "eigenvalues": [1.0, -1.0],
            "delta_p": 10.0,
            "m_steps": 10,
            "realizations": 4,
            "seed": 1,
            "output_path": null,
            "b_plus_sq": null,
            "extra_knob": 3
        }"#,
    )
    .unwrap();
    let out = weakmeas(&["repeat", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra_knob"));
}

#[test]
fn subcommand_config_mismatch_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::default_for(ExperimentKind::Lg);
    let path = write_config(dir.path(), &cfg);
    let out = weakmeas(&["repeat", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["repeat", "--realizations", "16", "--steps", "50", "--seed", "314"];
    let a = weakmeas(&args);
    let b = weakmeas(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = weakmeas(&[
        "repeat",
        "--realizations",
        "16",
        "--steps",
        "50",
        "--seed",
        "315",
    ]);
    assert_ne!(a.stdout, c.stdout, "seed must matter");
}

#[test]
fn every_subcommand_runs() {
    for (name, extra) in [
        ("meter-check", &["--realizations", "2000"][..]),
        ("idealized", &["--realizations", "2000"][..]),
        ("repeat", &["--realizations", "8", "--steps", "20"][..]),
        ("lg", &["--realizations", "4000"][..]),
        ("tomo-optimize", &[][..]),
        ("tomo-roundtrip", &["--realizations", "50"][..]),
    ] {
        let mut args = vec![name];
        args.extend_from_slice(extra);
        let out = weakmeas(&args);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let doc = report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(doc.config.experiment.name(), name);
    }
}

#[test]
fn document_embeds_closed_forms_next_to_estimates() {
    let out = weakmeas(&["lg", "--realizations", "100000", "--seed", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let results = &value["results"];
    assert!(results["closed_form"]["weak_error"].is_number());
    assert!(results["estimates"]["empirical_standard_error"].is_number());
}
