//! Drives the `ris-autonomy` binary and the command functions.

use std::path::{Path, PathBuf};
use std::process::Command;

use ris_autonomy::config::ConfigMap;
use ris_autonomy::SearchConfig;
use ris_autonomy_cli::{cmd_solve, run_sweep, validate_scenario, Outcome, ValidateOptions};

fn reference_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.conf")
}

fn sites_example() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/sites.example.conf")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ris-autonomy"))
}

fn field(report: &str, key: &str) -> Option<String> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .map(|v| v.split_whitespace().next().unwrap().to_string())
}

#[test]
fn solve_feasible_report() {
    let out = bin()
        .args(["solve", "--config"])
        .arg(reference_config())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&text, "status").as_deref(), Some("feasible"));
    let a: f64 = field(&text, "a_opt").unwrap().parse().unwrap();
    assert!(a > 0.9 && a < 1.0);
    assert!(text.contains("snr_opt_db:"));
}

#[test]
fn solve_exit_codes() {
    let status = |args: &[&str]| {
        bin()
            .arg("solve")
            .arg("--config")
            .arg(reference_config())
            .args(args)
            .output()
            .unwrap()
    };
    assert_eq!(status(&["--override", "p_chip_w=1"]).status.code(), Some(2));
    let bad = status(&["--override", "lateral_offset_m=0"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("lateral_offset_m"));
    assert_eq!(status(&["--override", "typo_key=1"]).status.code(), Some(3));

    let missing = bin()
        .args(["solve", "--config", "/nonexistent/file.conf"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn zero_chip_power_reports_boundary() {
    let mut out = Vec::new();
    let outcome = cmd_solve(
        &reference_config(),
        &["p_chip_w=0".to_string()],
        &SearchConfig::default(),
        None,
        &mut out,
    )
    .unwrap();
    assert_eq!(outcome, Outcome::Success);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("a_opt: 1.000000000 (boundary"));
}

#[test]
fn solve_writes_objective_curve() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let status = bin()
        .args(["solve", "--config"])
        .arg(reference_config())
        .arg("--out")
        .arg(&curve)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let text = std::fs::read_to_string(curve).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r1h_m,objective,feasible"));
    assert_eq!(lines.count(), 1001);
}

#[test]
fn single_point_sweep_matches_solve() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("one.csv");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(reference_config())
        .args(["--pc-list", "1e-6", "--ys-list", "5", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["p_c_w", "y_s_m", "feasible", "r1h_opt_m", "a_opt", "snr_opt_db", "p_harv_w", "p_ris_w"]
    );
    let row = rdr.records().next().unwrap().unwrap();

    let mut out = Vec::new();
    cmd_solve(&reference_config(), &[], &SearchConfig::default(), None, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let r_solve: f64 = field(&text, "r1h_opt_m").unwrap().parse().unwrap();
    let snr_solve: f64 = field(&text, "snr_opt_db").unwrap().parse().unwrap();
    let r_sweep: f64 = row[3].parse().unwrap();
    let snr_sweep: f64 = row[5].parse().unwrap();
    assert!((r_solve - r_sweep).abs() < 1e-6);
    assert!((snr_solve - snr_sweep).abs() < 1e-6);
}

#[test]
fn sweep_keeps_infeasible_rows_in_order() {
    let base = ConfigMap::read(&reference_config()).unwrap();
    let pcs = [1e-4, 1e-6, 1e-3, 1e-8];
    let rows = run_sweep(&base, &pcs, &[20.0, 5.0], &SearchConfig::default()).unwrap();
    assert_eq!(rows.len(), 8);
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.y_s_m, r.p_c_w)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    let infeasible: Vec<_> = rows.iter().filter(|r| !r.feasible).collect();
    assert_eq!(infeasible.len(), 4);
    assert!(infeasible
        .iter()
        .all(|r| r.a_opt.is_none() && r.snr_opt_db.is_none() && r.p_ris_w > 0.0));

    assert!(run_sweep(&base, &[], &[5.0], &SearchConfig::default()).is_err());
}

#[test]
fn sweep_empty_cells_for_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("tail.csv");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(reference_config())
        .args(["--pc-list", "1e-6,1e-3", "--ys-list", "5", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let text = std::fs::read_to_string(csv_path).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("0.001,5.0,false,,,,,"), "{last}");
}

#[test]
fn sweep_unwritable_output() {
    let out = bin()
        .args(["sweep", "--config"])
        .arg(reference_config())
        .args(["--pc-list", "1e-6", "--out", "/nonexistent/dir/out.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn validate_default_passes() {
    let out = bin()
        .args(["validate", "--config"])
        .arg(reference_config())
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("overall: PASS"));
}

#[test]
fn loosened_oracle_grid_widens_delta() {
    let base: ris_autonomy::Scenario = ConfigMap::read(&reference_config())
        .and_then(ris_autonomy::Scenario::from_config)
        .unwrap();
    let tight = validate_scenario(&base, &ValidateOptions::default()).unwrap();
    let loose_opts = ValidateOptions {
        a_step: 0.05,
        r1h_step_m: 2.0,
        ..ValidateOptions::default()
    };
    let loose = validate_scenario(&base, &loose_opts).unwrap();
    assert!(loose.snr_delta_db.unwrap() > tight.snr_delta_db.unwrap());
    let within = loose.snr_delta_db.unwrap() <= 0.1 && loose.r1h_delta_m.unwrap() <= 0.5;
    assert_eq!(loose.placement_passed, within);
    assert!(!loose.placement_passed);

    let out = bin()
        .args(["validate", "--a-step", "0.05", "--config"])
        .arg(reference_config())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn validate_phase_check_passes() {
    let base: ris_autonomy::Scenario = ConfigMap::read(&reference_config())
        .and_then(ris_autonomy::Scenario::from_config)
        .unwrap();
    let report = validate_scenario(&base, &ValidateOptions::default()).unwrap();
    assert!(report.phase.passed);
    assert!(report.phase.best_quantized_linear <= report.phase.cophased_linear);
}

#[test]
fn select_site_command() {
    let out = bin()
        .args(["select-site", "--config"])
        .arg(reference_config())
        .arg("--sites")
        .arg(sites_example())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("selected: ")));

    // heavy consumption: nothing is selected
    let out = bin()
        .args(["select-site", "--override", "p_chip_w=1", "--config"])
        .arg(reference_config())
        .arg("--sites")
        .arg(sites_example())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.conf");
    std::fs::write(&empty, "# no sites\n").unwrap();
    let out = bin()
        .args(["select-site", "--config"])
        .arg(reference_config())
        .arg("--sites")
        .arg(&empty)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn select_site_prefers_closer_surface_under_load() {
    let dir = tempfile::tempdir().unwrap();
    let sites = dir.path().join("two.conf");
    std::fs::write(
        &sites,
        "site.0.r1h_m = 2\nsite.0.lateral_offset_m = 20\nsite.0.ris_height_m = 12\n\
         site.1.r1h_m = 2\nsite.1.lateral_offset_m = 5\nsite.1.ris_height_m = 12\n",
    )
    .unwrap();
    let out = bin()
        .args(["select-site", "--override", "p_chip_w=30e-6", "--config"])
        .arg(reference_config())
        .arg("--sites")
        .arg(&sites)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("selected: 1"));
}
