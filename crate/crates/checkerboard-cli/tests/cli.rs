//! End-to-end tests of the `checkerboard` binary: exit codes, CSV shapes,
//! parameter echo, and byte determinism across runs and thread counts.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checkerboard"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file exists")
}

#[test]
fn oracle_verify_reports_all_suites_and_succeeds() {
    let output = run(&["oracle-verify", "--max-n", "6"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let stdout = stdout_of(&output);
    for suite in [
        "unrestricted corner counts",
        "restricted corner counts",
        "first-arrival counts",
        "corner-tally invariants",
    ] {
        let line = stdout
            .lines()
            .find(|l| l.starts_with(suite))
            .unwrap_or_else(|| panic!("missing suite line for {suite:?} in:\n{stdout}"));
        assert!(line.contains("ok"), "suite did not pass: {line}");
    }
}

#[test]
fn usage_errors_exit_with_code_2() {
    // clap-level: unknown subcommand.
    let output = run(&["no-such-command"]);
    assert_eq!(output.status.code(), Some(2));

    // Validated after parsing: out-of-range enumeration bound.
    let output = run(&["oracle-verify", "--max-n", "40"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("--max-n"));

    // Inverted scan range.
    let output = run(&["ratio-scan", "--z-min", "100", "--z-max", "10", "--v", "0.5"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_with_code_1() {
    // Spacelike interval: parses fine, fails in the library.
    let output = run(&["convergence", "--interval", "5,2", "--n-list", "64"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("light cone"));
}

#[test]
fn propagator_table_shape_and_determinism() {
    let args = ["propagator-table", "--component", "all", "--grid", "0:1:3,1:2:2"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let csv = stdout_of(&first);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("x_BA_lambda_c,t_BA_lambda_c_over_c,component,variant,re,im")
    );
    // 2 times x 3 positions, all inside or on the cone with x >= 0:
    // ++/+- carry full+first+later, -+/-- carry full+later => 10 rows/point.
    assert_eq!(csv.lines().count(), 1 + 2 * 3 * 10);

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "table output must be reproducible");
}

#[test]
fn propagator_table_skips_spacelike_points() {
    // x in {-3, 0, 3} at t = 1: only x = 0 is inside the cone.
    let output = run(&["propagator-table", "--component", "pm", "--grid", "-3:3:3,1:1:1"]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout_of(&output);
    // Header + one point carrying full+first+later for +-.
    assert_eq!(csv.lines().count(), 1 + 3);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("0.00000000000e0,")));
}

#[test]
fn figure_echoes_derived_constants_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig6.csv");
    let output = run(&[
        "figure",
        "--preset",
        "fig6",
        "--n-t",
        "16",
        "--quad-points",
        "501",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let echo = stdout_of(&output);
    assert!(echo.contains("v_over_c = 3.862e-3"), "echo:\n{echo}");
    assert!(echo.contains("t0_seconds = 1.296e-14"), "echo:\n{echo}");
    assert!(echo.contains("x0_angstrom = -150 (-6 dx)"), "echo:\n{echo}");

    let csv = read(&out);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some(
            "T_seconds,T_over_t0,Pi,Pi_plus,Pi_minus,Pi1,Pi23,Pi_cross,Pi1_scaled,Pi_cross_scaled"
        )
    );
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn figure_narrow_preset_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7.csv");
    let output = run(&[
        "figure",
        "--preset",
        "fig7",
        "--n-t",
        "16",
        "--quad-points",
        "501",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let echo = stdout_of(&output);
    assert!(echo.contains("t0_seconds = 1.728e-15"), "echo:\n{echo}");
    assert!(echo.contains("dk_per_angstrom = 0.2"), "echo:\n{echo}");
    assert!(echo.contains("x0_angstrom = -20 (-8 dx)"), "echo:\n{echo}");
}

#[test]
fn figure_output_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out_serial = dir.path().join("serial.csv");
    let out_parallel = dir.path().join("parallel.csv");
    for (threads, out) in [("1", &out_serial), ("3", &out_parallel)] {
        let output = run(&[
            "figure",
            "--preset",
            "fig6",
            "--n-t",
            "16",
            "--quad-points",
            "501",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    assert_eq!(
        read(&out_serial),
        read(&out_parallel),
        "thread count must not change output bytes"
    );
}

#[test]
fn ratio_scan_shape_and_determinism() {
    let args = [
        "ratio-scan",
        "--z-min",
        "1e3",
        "--z-max",
        "1e4",
        "--v",
        "0.003862",
        "--points",
        "50",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let csv = stdout_of(&first);
    assert_eq!(
        csv.lines().next(),
        Some("z,exact_pp,exact_mm,exact_pm,asymptotic_pm,j0_near_zero")
    );
    assert_eq!(csv.lines().count(), 1 + 50);
    // Endpoints land exactly on the requested bounds.
    assert!(csv.lines().nth(1).unwrap().starts_with("1.00000000000e3,"));
    assert!(csv.lines().last().unwrap().starts_with("1.00000000000e4,"));

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn convergence_error_column_decreases() {
    let output = run(&[
        "convergence",
        "--interval",
        "1,2",
        "--n-list",
        "64,128,256,512",
        "--component",
        "pp",
        "--variant",
        "first",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout_of(&output);
    assert_eq!(
        csv.lines().next(),
        Some("n,re,im,reference_re,reference_im,rel_error")
    );
    let errors: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 4);
    assert!(
        errors.windows(2).all(|w| w[1] < w[0]),
        "errors should fall with N: {errors:?}"
    );
}
