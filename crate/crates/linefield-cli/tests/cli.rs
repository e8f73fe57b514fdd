//! End-to-end tests of the `linefield` binary: flags, file outputs, exit
//! codes, and the manifest round-trip contract.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn linefield(dir: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_linefield"));
    cmd.current_dir(dir);
    cmd.env_remove("LINEFIELD_SEED");
    cmd
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().expect("binary runs").status.code().expect("no signal")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("file exists");
    serde_json::from_str(&text).expect("valid JSON")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).expect("file exists");
    let mut lines = text.lines();
    let header = lines.next().expect("header row");
    assert!(!header.is_empty());
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn simulate_writes_histogram_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "A", "--n", "10000", "--seed", "7", "--out", "a.csv",
    ]));

    let rows = csv_rows(&dir.path().join("a.csv"));
    assert_eq!(rows.len(), 64);
    let total: u64 = rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 10_000);
    let header = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(header.starts_with("bin_left,bin_right,count,density\n"));

    let manifest = read_json(&dir.path().join("a.manifest.json"));
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["case"], "A");
    assert_eq!(manifest["n"], 10_000);
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["bins"], 64);
    assert_eq!(manifest["outputs"]["histogram_csv"], "a.csv");
    assert!(manifest["tool_version"].is_string());
    assert!(manifest["duration_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulate_case_b_histogram_starts_at_right_angle() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "B", "--n", "1000", "--seed", "1", "--out", "b.csv",
    ]));
    for row in csv_rows(&dir.path().join("b.csv")) {
        let bin_left: f64 = row[0].parse().unwrap();
        assert!(bin_left >= FRAC_PI_2 - 1e-9, "bin_left {bin_left}");
    }
}

#[test]
fn simulate_rejects_bad_flags_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // n = 0 fails config validation.
    assert_eq!(
        exit_code(linefield(dir.path()).args(["simulate", "--case", "A", "--n", "0"])),
        2
    );
    // Unknown case.
    assert_eq!(
        exit_code(linefield(dir.path()).args(["simulate", "--case", "Z", "--n", "10"])),
        2
    );
    // --case conflicts with --fixed.
    assert_eq!(
        exit_code(linefield(dir.path()).args([
            "simulate", "--case", "A", "--fixed", "diagonal", "--model", "sine", "--n", "10",
        ])),
        2
    );
    // Neither --case nor --fixed.
    assert_eq!(
        exit_code(linefield(dir.path()).args(["simulate", "--n", "10"])),
        2
    );
    // --fixed without --model.
    assert_eq!(
        exit_code(linefield(dir.path()).args(["simulate", "--fixed", "diagonal", "--n", "10"])),
        2
    );
}

#[test]
fn simulate_unwritable_output_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let code = exit_code(linefield(dir.path()).args([
        "simulate",
        "--case",
        "A",
        "--n",
        "100",
        "--out",
        "/nonexistent-linefield-dir/a.csv",
    ]));
    assert_eq!(code, 3);
}

#[test]
fn density_tables_and_manifest_values() {
    let dir = tempfile::tempdir().unwrap();

    run_ok(linefield(dir.path()).args(["density", "--case", "diag-sine", "--out", "ds.csv"]));
    let manifest = read_json(&dir.path().join("ds.manifest.json"));
    let mode = manifest["mode"].as_f64().unwrap();
    assert!((mode - 1.7713229).abs() < 1e-6, "mode {mode}");

    run_ok(linefield(dir.path()).args(["density", "--case", "C", "--out", "c.csv"]));
    let manifest = read_json(&dir.path().join("c.manifest.json"));
    let obtuse = manifest["obtuse_prob"].as_f64().unwrap();
    assert!((obtuse - 0.8219).abs() < 1e-4, "obtuse_prob {obtuse}");

    run_ok(linefield(dir.path()).args(["density", "--case", "A", "--out", "a.csv"]));
    let rows = csv_rows(&dir.path().join("a.csv"));
    assert_eq!(rows.len(), 512);
    let first_alpha: f64 = rows[0][0].parse().unwrap();
    let first_pdf: f64 = rows[0][1].parse().unwrap();
    assert!((first_alpha - std::f64::consts::PI / 3.0).abs() < 1e-12);
    assert_eq!(first_pdf, 0.0);

    assert_eq!(
        exit_code(linefield(dir.path()).args(["density", "--case", "E"])),
        2
    );
}

#[test]
fn compare_case_d_passes_and_writes_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "compare", "--case", "D", "--n", "20000", "--seed", "11", "--alpha", "0.001", "--out",
        "d.json",
    ]));
    let report = read_json(&dir.path().join("d.json"));
    assert_eq!(report["pass"], true);
    assert!(report["ks_statistic"].as_f64().unwrap() < report["ks_threshold"].as_f64().unwrap());
    assert_eq!(report["obtuse_analytic"], 1.0);
    assert!(report["obtuse_z"].is_null());
    assert_eq!(report["manifest"]["command"], "compare");

    let svg = std::fs::read_to_string(dir.path().join("d.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
    assert!(svg.contains("<rect"));
}

#[test]
fn compare_fixed_diagonal_sine_passes() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "compare", "--fixed", "diagonal", "--model", "sine", "--n", "20000", "--seed", "3",
        "--out", "diag.json",
    ]));
    let report = read_json(&dir.path().join("diag.json"));
    assert_eq!(report["pass"], true);
    assert_eq!(report["manifest"]["fixed"], "diagonal");
    assert_eq!(report["manifest"]["model"], "sine");
}

#[test]
fn compare_vertical_against_oracle_passes() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "compare", "--fixed", "vertical", "--model", "constant", "--n", "20000", "--seed", "5",
        "--out", "v.json", "--csv", "v.csv",
    ]));
    let report = read_json(&dir.path().join("v.json"));
    assert_eq!(report["pass"], true);
    // Almost surely obtuse: the oracle puts zero mass below the right angle.
    assert_eq!(report["obtuse_analytic"].as_f64().unwrap(), 1.0);
    let rows = csv_rows(&dir.path().join("v.csv"));
    let total: u64 = rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 20_000);
}

#[test]
fn window_commands() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "window", "--window", "circle", "--n", "50000", "--seed", "2", "--out", "circle.json",
    ]));
    let report = read_json(&dir.path().join("circle.json"));
    assert_eq!(report["pass"], true);
    assert!(report["obtuse_analytic"].is_null());

    run_ok(linefield(dir.path()).args([
        "window", "--window", "rect", "--eps", "0.9", "--n", "50000", "--seed", "4", "--out",
        "rect.json",
    ]));
    let report = read_json(&dir.path().join("rect.json"));
    assert_eq!(report["pass"], true);
    assert_eq!(report["manifest"]["eps"], 0.9);

    // Eccentricity outside [0, 1) is a usage error.
    assert_eq!(
        exit_code(linefield(dir.path()).args([
            "window", "--window", "rect", "--eps", "1.2", "--n", "100",
        ])),
        2
    );
    // --eps with a non-rect window is a usage error.
    assert_eq!(
        exit_code(linefield(dir.path()).args([
            "window", "--window", "circle", "--eps", "0.5", "--n", "100",
        ])),
        2
    );
}

#[test]
fn manifest_roundtrip_reproduces_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "C", "--n", "5000", "--seed", "42", "--bins", "32", "--out",
        "first.csv",
    ]));
    let manifest = read_json(&dir.path().join("first.manifest.json"));

    // Reconstruct the command line from the manifest alone.
    let case = manifest["case"].as_str().unwrap().to_string();
    let n = manifest["n"].as_u64().unwrap().to_string();
    let seed = manifest["seed"].as_u64().unwrap().to_string();
    let bins = manifest["bins"].as_u64().unwrap().to_string();
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", &case, "--n", &n, "--seed", &seed, "--bins", &bins, "--out",
        "second.csv",
    ]));

    let first = std::fs::read(dir.path().join("first.csv")).unwrap();
    let second = std::fs::read(dir.path().join("second.csv")).unwrap();
    assert_eq!(first, second, "re-run from manifest must be byte-identical");
}

#[test]
fn worker_count_does_not_change_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "A", "--n", "20000", "--seed", "7", "--workers", "1", "--out",
        "w1.csv",
    ]));
    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "A", "--n", "20000", "--seed", "7", "--workers", "8", "--out",
        "w8.csv",
    ]));
    assert_eq!(
        std::fs::read(dir.path().join("w1.csv")).unwrap(),
        std::fs::read(dir.path().join("w8.csv")).unwrap()
    );
}

#[test]
fn env_seed_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let mut cmd = linefield(dir.path());
    cmd.env("LINEFIELD_SEED", "123");
    run_ok(cmd.args(["simulate", "--case", "A", "--n", "2000", "--out", "env.csv"]));
    let manifest = read_json(&dir.path().join("env.manifest.json"));
    assert_eq!(manifest["seed"], 123);

    run_ok(linefield(dir.path()).args([
        "simulate", "--case", "A", "--n", "2000", "--seed", "123", "--out", "explicit.csv",
    ]));
    assert_eq!(
        std::fs::read(dir.path().join("env.csv")).unwrap(),
        std::fs::read(dir.path().join("explicit.csv")).unwrap()
    );

    // A malformed env seed is a usage error.
    let mut cmd = linefield(dir.path());
    cmd.env("LINEFIELD_SEED", "not-a-number");
    assert_eq!(
        exit_code(cmd.args(["simulate", "--case", "A", "--n", "10"])),
        2
    );
}
