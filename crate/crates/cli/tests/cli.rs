//! End-to-end tests of the command-line interface.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bhfluid(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhfluid"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    fs::write(dir.join(name), contents).unwrap();
}

fn manifest(dir: &Path, out: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(out).join("manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn steady_sweep_is_reproducible_and_survives_case_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"cases": [
            {"label": "a", "params": {"eps": 1.0, "k": 0.3, "mass": 1.0},
             "r0": 10.0, "rho0": 1.0, "v0": 0.22},
            {"label": "bad", "params": {"eps": 1.0, "k": 0.3, "mass": 1.0},
             "r0": 1.0, "rho0": 1.0, "v0": 0.1}
        ]}"#,
    );
    for out in ["out1", "out2"] {
        let o = bhfluid(&["steady", "--config", "cfg.json", "--out", out], dir);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (m1, m2) = (manifest(dir, "out1"), manifest(dir, "out2"));
    assert_eq!(m1["files"], m2["files"], "checksums must be reproducible");
    assert_eq!(m1["files"].as_array().unwrap().len(), 1);
    assert_eq!(m1["cases"][0]["status"], "ok");
    assert!(m1["cases"][1]["status"].as_str().unwrap().starts_with("error"));
    // The atlas has the documented header.
    let csv = fs::read_to_string(dir.join("out1/steady_a.csv")).unwrap();
    assert!(csv.starts_with("r,rho,v,branch_id,is_shock,regime\n"));
    assert!(csv.contains(",two_sonic_points"));
    // A shock-bearing orbit marks exactly one shock row.
    assert_eq!(csv.matches(",1,two_sonic_points").count(), 1);
}

#[test]
fn steady_empty_case_list_succeeds_with_empty_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "cfg.json", r#"{"cases": []}"#);
    let o = bhfluid(&["steady", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success());
    let m = manifest(dir, "out");
    assert!(m["files"].as_array().unwrap().is_empty());
}

#[test]
fn riemann_identical_states_give_zero_strength() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"params": {"eps": 1.0, "k": 0.3, "mass": 0.0}, "r0": 100.0,
            "left": {"rho": 1.0, "v": 0.1}, "right": {"rho": 1.0, "v": 0.1}}"#,
    );
    let o = bhfluid(&["riemann", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success());
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/riemann_record.json")).unwrap())
            .unwrap();
    assert!(record["strength"].as_f64().unwrap() < 1e-12);
    let csv = fs::read_to_string(dir.join("out/riemann_profile.csv")).unwrap();
    assert!(csv.starts_with("xi,rho,v\n"));
    assert_eq!(csv.lines().count(), 513);
}

#[test]
fn riemann_stiff_record_has_contact_speeds() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    // Stiff member: both waves are contacts at -+ (1 - 2M/r0)/eps.
    write(
        dir,
        "cfg.json",
        r#"{"params": {"eps": 1.0, "k": 1.0, "mass": 1.0}, "r0": 4.0,
            "left": {"rho": 1.0, "v": 0.2}, "right": {"rho": 0.5, "v": -0.1}}"#,
    );
    let o = bhfluid(&["riemann", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/riemann_record.json")).unwrap())
            .unwrap();
    let alpha = 1.0 - 2.0 / 4.0;
    assert_eq!(record["wave1"]["kind"], "contact");
    assert_eq!(record["wave2"]["kind"], "contact");
    assert!((record["wave1"]["speeds"][0].as_f64().unwrap() + alpha).abs() < 1e-12);
    assert!((record["wave2"]["speeds"][0].as_f64().unwrap() - alpha).abs() < 1e-12);
}

#[test]
fn evolve_cadence_zero_keeps_initial_and_final_snapshots_only() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"params": {"eps": 1.0, "k": 0.3, "mass": 1.0}, "dr": 0.05, "dt": 0.02,
            "r_lo": 2.5, "r_hi": 5.0, "t_end": 0.1,
            "init": {"steady": {"r0": 4.0, "rho0": 1.0, "v0": 0.05}}}"#,
    );
    let o = bhfluid(&["evolve", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut snaps: Vec<String> = fs::read_dir(dir.join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("snapshot_"))
        .collect();
    snaps.sort();
    assert_eq!(snaps, ["snapshot_000000.csv", "snapshot_000005.csv"]);
    let diag = fs::read_to_string(dir.join("out/diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,tv_lnrho,tv_velocity,L_J,max_wavespeed\n"));
    assert_eq!(diag.lines().count(), 7); // header + initial + 5 steps
}

#[test]
fn evolve_rejects_cfl_violations_with_exit_code_3() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"params": {"eps": 1.0, "k": 0.3, "mass": 1.0}, "dr": 0.05, "dt": 0.2,
            "r_lo": 2.5, "r_hi": 5.0, "t_end": 0.4,
            "init": {"steady": {"r0": 4.0, "rho0": 1.0, "v0": 0.05}}}"#,
    );
    let o = bhfluid(&["evolve", "--config", "cfg.json", "--out", "out"], dir);
    assert_eq!(o.status.code(), Some(3));
    // No time stepping happened: no snapshots were written.
    assert!(!dir.join("out/snapshot_000000.csv").exists());
}

#[test]
fn evolve_is_deterministic_under_a_fixed_offset() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"params": {"eps": 1.0, "k": 0.3, "mass": 0.0}, "dr": 0.05, "dt": 0.02,
            "r_lo": 99.0, "r_hi": 101.0, "t_end": 0.1, "seq_offset": 3,
            "init": {"riemann": {"left": {"rho": 1.5, "v": 0.0},
                                 "right": {"rho": 0.6, "v": 0.0}, "r_mid": 100.0}}}"#,
    );
    for out in ["out1", "out2"] {
        let o = bhfluid(&["evolve", "--config", "cfg.json", "--out", out], dir);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(manifest(dir, "out1")["files"], manifest(dir, "out2")["files"]);
    // A different offset changes the sampled path.
    let o = bhfluid(
        &["evolve", "--config", "cfg.json", "--out", "out3", "--seq-offset", "4"],
        dir,
    );
    assert!(o.status.success());
    assert_ne!(manifest(dir, "out1")["files"], manifest(dir, "out3")["files"]);
}

#[test]
fn limits_report_covers_all_cases() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"base": {"eps": 1.0, "k": 0.3, "mass": 1.0},
            "cases": [{"kind": "non_relativistic", "small": 1e-4},
                      {"kind": "minkowski", "small": 1e-6}]}"#,
    );
    let o = bhfluid(&["limits", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.join("out/limits_report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("non_relativistic"));
    assert!(csv.contains("minkowski"));
}

#[test]
fn verify_reports_selected_criteria_and_rejects_unknown_suites() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let o = bhfluid(&["verify", "--suite", "1", "--out", "out"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("criterion")).count(), 1);
    let report = fs::read_to_string(dir.join("out/verify_report.csv")).unwrap();
    assert_eq!(report.lines().count(), 2);

    let o = bhfluid(&["verify", "--suite", "11"], dir);
    assert_eq!(o.status.code(), Some(64));
    let o = bhfluid(&["verify", "--suite", "nope"], dir);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn plot_script_references_the_manifest_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "cfg.json",
        r#"{"cases": [{"label": "a", "params": {"eps": 0.0, "k": 0.3, "mass": 1.0},
                       "r0": 4.0, "rho0": 1.0, "v0": 0.1}]}"#,
    );
    let o = bhfluid(&["steady", "--config", "cfg.json", "--out", "out"], dir);
    assert!(o.status.success());
    let o = bhfluid(
        &["plot-script", "--manifest", "out/manifest.json", "--out", "plot.gp"],
        dir,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let script = fs::read_to_string(dir.join("plot.gp")).unwrap();
    assert!(script.contains("steady_a.csv"));
    assert!(script.contains("set output"));
}

#[test]
fn usage_errors_exit_with_64() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bhfluid(&["no-such-command"], tmp.path());
    assert_eq!(o.status.code(), Some(64));
}
