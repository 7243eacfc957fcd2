//! Command-line interface contract: output formats, config handling, exit
//! codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpt-sim"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qpt-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn csv_format_contract() {
    let out = bin()
        .args(["variances", "--b", "0,0.2", "--kappa", "0.5", "--l-min", "0.01", "--l-max", "12", "--steps", "5", "-o", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // LF endings only
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "b,two_kappa_l,var_qi0,var_psl,var_qsl,var_pi0,mask");
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 7);
    assert_eq!(fields[6], "ok");
    // 17 significant digits round-trip exactly
    let v: f64 = fields[2].parse().unwrap();
    assert_eq!(format!("{v:.16e}"), fields[2]);
    // stderr carries the one-line summary
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rows=10") && err.contains("masked="), "summary line: {err}");
}

#[test]
fn masked_cells_render_the_token_and_do_not_fail() {
    // l starts at 0 where the noise figure has no photons to normalize by
    let out = bin()
        .args(["nf", "--b", "0.2", "--l-min", "0", "--l-max", "2", "--steps", "4", "-o", "-"])
        .output()
        .unwrap();
    assert!(out.status.success(), "masked points must not change the exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains("MASKED:DegenerateFlux"), "row: {row}");
    assert!(row.ends_with("DegenerateFlux"));
}

#[test]
fn json_structure_and_meta_echo() {
    let out = bin()
        .args(["nf", "--b", "0.3", "--steps", "4", "--l-max", "3", "--format", "json", "--log-scale", "lg_nf_split", "-o", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["axes"][0]["name"], "b");
    assert_eq!(doc["axes"][1]["name"], "two_kappa_l");
    assert_eq!(doc["columns"][0]["name"], "nf");
    assert_eq!(doc["meta"]["observable_set"], "nf");
    assert_eq!(doc["meta"]["config"]["log_scale"], "lg_nf_split");
    assert_eq!(doc["meta"]["config"]["steps"], 4);
    // numbers round-trip through JSON
    let v = doc["columns"][0]["values"][1].as_f64().unwrap();
    assert!(v.is_finite());
}

#[test]
fn flags_override_config_file() {
    let cfg = tmp("override.json");
    std::fs::write(&cfg, r#"{"b": [0.5], "steps": 4, "l_max": 6.0, "kappa": 0.5}"#).unwrap();
    let out = bin()
        .args(["variances", "--config", cfg.to_str().unwrap(), "--steps", "3", "--format", "json", "-o", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["config"]["steps"], 3, "flag wins");
    assert_eq!(doc["meta"]["config"]["l_max"], 6.0, "file value survives where no flag is given");
    assert_eq!(doc["meta"]["b_values"], serde_json::json!([0.5]));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let cfg = tmp("unknown_key.json");
    std::fs::write(&cfg, r#"{"steps": 4, "no_such_key": 1}"#).unwrap();
    let out = bin()
        .args(["variances", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    // unknown figure id -> spec error (2)
    let out = bin().args(["figure", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // malformed sweep (stop <= start) -> 2
    let out = bin().args(["variances", "--l-min", "5", "--l-max", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unwritable output path -> 3
    let out = bin()
        .args(["variances", "--steps", "2", "-o", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // bad flag usage -> clap's 2
    let out = bin().args(["variances", "--pump-phase", "quarter"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_env_is_accepted() {
    let out = bin()
        .args(["variances", "--b", "0.2", "--steps", "8", "-o", "-"])
        .env("QPT_SIM_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let single = String::from_utf8(out.stdout).unwrap();
    let out = bin()
        .args(["variances", "--b", "0.2", "--steps", "8", "-o", "-"])
        .env("QPT_SIM_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(single, String::from_utf8(out.stdout).unwrap(), "worker count must not change output");
}

#[test]
fn epr_grid_command_shape() {
    let out = bin()
        .args(["epr", "--b", "0.2", "--theta-plus-phi-grid", "16", "--steps", "4", "--l-max", "3", "--format", "json", "-o", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["axes"][2]["name"], "theta_plus_phi");
    assert_eq!(doc["axes"][2]["values"].as_array().unwrap().len(), 16);
    assert_eq!(doc["columns"][0]["values"].as_array().unwrap().len(), 4 * 16);
}

#[test]
fn figure_ids_all_run_small() {
    // every registered figure must at least parse its stored config; run one
    // cheap representative end to end
    let out = bin()
        .args(["figure", "fig3b", "-o", tmp("fig3b.csv").to_str().unwrap(), "--steps", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(tmp("fig3b.csv")).unwrap();
    assert!(text.starts_with("b,two_kappa_l,eta,log_negativity,mask"));
}

#[test]
fn verify_full_grid_passes() {
    let out = bin().args(["verify", "--grid", "full"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
