//! End-to-end checks of the command-line binary: exit codes, the
//! machine-readable error JSON, flag overrides, and the output files of a
//! small run.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radialnls"))
}

fn tmp(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("radialnls-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn kernels_run_succeeds_and_writes_outputs() {
    let dir = tmp("kernels");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{
            "scenario": "kernels",
            "grid": {"r_max": 32.0, "n": 256},
            "data": {"family": "gaussian", "width": 1.0},
            "output_dir": "PLACEHOLDER"
        }"#
        .replace("PLACEHOLDER", dir.join("out").to_str().unwrap()),
    )
    .unwrap();
    let status = bin()
        .args(["kernels", "--config", config_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["report.json", "series.csv", "manifest.json"] {
        assert!(dir.join("out").join(file).is_file(), "{file} missing");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "radialnls");
    assert!(manifest["tolerances"]["reconstruction_rel_l2"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_config_block_exits_2_with_error_json() {
    let dir = tmp("missing-grid");
    let config_path = dir.join("config.json");
    // no grid block at all
    fs::write(
        &config_path,
        r#"{"scenario": "decompose", "data": {"family": "gaussian", "width": 1.0}, "output_dir": "out"}"#,
    )
    .unwrap();
    let output = bin()
        .args(["decompose", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let line = String::from_utf8_lossy(&output.stdout);
    let parsed: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(parsed["exit"], 2);
    assert!(
        parsed["error"].as_str().unwrap().contains("grid"),
        "error JSON should name the missing field: {line}"
    );
}

#[test]
fn infeasible_choose_n_exits_3() {
    let dir = tmp("infeasible");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        format!(
            r#"{{
                "scenario": "evolve",
                "grid": {{"r_max": 32.0, "n": 512}},
                "data": {{"family": "rough-spectral", "s0": 0.9, "seed": 3, "amplitude": 50.0}},
                "params": {{"delta0": 1e-12}},
                "solver": {{"dt": 0.005, "t_end": 0.1, "mu": 1.0}},
                "output_dir": "{}"
            }}"#,
            dir.join("out").to_str().unwrap()
        ),
    )
    .unwrap();
    let output = bin()
        .args(["evolve", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{}", String::from_utf8_lossy(&output.stdout));
    let parsed: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&output.stdout).trim()).unwrap();
    assert_eq!(parsed["kind"], "infeasible");
}

#[test]
fn scenario_mismatch_is_a_config_error() {
    let dir = tmp("mismatch");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{
            "scenario": "kernels",
            "grid": {"r_max": 32.0, "n": 256},
            "data": {"family": "gaussian", "width": 1.0},
            "output_dir": "out"
        }"#,
    )
    .unwrap();
    let output = bin()
        .args(["decompose", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn out_and_dt_overrides_apply() {
    let dir = tmp("overrides");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{
            "scenario": "evolve",
            "grid": {"r_max": 64.0, "n": 1024},
            "data": {"family": "gaussian", "width": 1.0, "amplitude": 0.001},
            "params": {"n_dyadic": 2.0},
            "solver": {"dt": 0.004, "t_end": 0.5, "mu": 0.0, "snapshot_stride": 25},
            "output_dir": "unused"
        }"#,
    )
    .unwrap();
    let out_dir = dir.join("redirected");
    // linear run (mu = 0) on a small grid; boundary margin stays inactive
    let status = bin()
        .args([
            "evolve",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--dt",
            "0.005",
            "--t-end",
            "0.25",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["t_end"].as_f64().unwrap(), 0.25);
    let series = fs::read_to_string(out_dir.join("series.csv")).unwrap();
    assert!(series.starts_with("t,mass,energy,hdot1_w,morawetz_M\n"));
}

#[test]
fn unknown_scenario_and_bad_flags() {
    let output = bin().args(["explode", "--config", "nope.json"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = bin().args(["kernels"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "missing --config must be a usage error");
}
