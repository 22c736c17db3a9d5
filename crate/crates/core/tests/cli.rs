use std::path::Path;
use std::process::Command;

use qrc_esp::sweep::{checkpoint_path, config_sidecar, run_sweep_resumable, SweepConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrc-esp"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = r#"{"u_count": 3, "v_count": 3, "metrics": ["esp", "ns_esp"], "lengths": {"indicator": 60}}"#;

#[test]
fn print_config_is_valid_json() {
    let out = bin().args(["print-config", "--experiment", "subset_gamma_p_grid"]).output().unwrap();
    assert!(out.status.success());
    let cfg = SweepConfig::from_json_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(cfg.u_count, Some(21));
}

#[test]
fn small_sweep_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("field.csv");
    let status = bin()
        .arg("--config").arg(&cfg)
        .arg("--out").arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("u,v,esp,ns_esp,error\n"));
    assert!(config_sidecar(&out).exists());
    assert!(!checkpoint_path(&out).exists());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("field.json");
    let status = bin()
        .arg("--config").arg(&cfg)
        .args(["--metrics", "esp", "--seed", "7", "--format", "json", "--workers", "2"])
        .arg("--out").arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["config"]["seed"], 7);
    assert_eq!(doc["metadata"]["columns"], serde_json::json!(["esp"]));
    assert_eq!(doc["points"].as_array().unwrap().len(), 9);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let bad_metric = bin().args(["--metrics", "bogus"]).arg("--out").arg(&out).status().unwrap();
    assert_eq!(bad_metric.code(), Some(1));
    let cfg = write_config(dir.path(), "{ not json");
    let bad_file = bin().arg("--config").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(bad_file.code(), Some(1));
    let no_out = bin().args(["--metrics", "esp"]).status().unwrap();
    assert_eq!(no_out.code(), Some(1));
    let unknown_flag = bin().arg("--frobnicate").status().unwrap();
    assert_eq!(unknown_flag.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn partial_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"experiment": "classical_reference", "u_count": 2, "v_count": 2, "rate_range": [1e-200, 1.1]}"#,
    );
    let out = dir.path().join("field.csv");
    let status = bin().arg("--config").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.contains(",overflow\n"));
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let mut outputs = Vec::new();
    for w in ["1", "8"] {
        let out = dir.path().join(format!("w{w}.csv"));
        let status = bin().arg("--config").arg(&cfg).args(["--workers", w]).arg("--out").arg(&out).status().unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn resumed_sweep_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_config(dir.path(), SMALL);
    let fresh = dir.path().join("fresh.csv");
    assert_eq!(bin().arg("--config").arg(&cfg_path).arg("--out").arg(&fresh).status().unwrap().code(), Some(0));

    // Leave a partial checkpoint behind: header plus the first three points.
    let out = dir.path().join("resumed.csv");
    let ckpt = checkpoint_path(&out);
    let cfg = SweepConfig::load(&cfg_path).unwrap();
    run_sweep_resumable(&cfg, Some(&ckpt)).unwrap();
    let text = std::fs::read_to_string(&ckpt).unwrap();
    let partial: Vec<&str> = text.lines().take(4).collect();
    std::fs::write(&ckpt, partial.join("\n") + "\n").unwrap();

    let run = bin().arg("--config").arg(&cfg_path).arg("--out").arg(&out).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stderr).contains("resumed 3 points"));
    assert_eq!(std::fs::read(&fresh).unwrap(), std::fs::read(&out).unwrap());
}
