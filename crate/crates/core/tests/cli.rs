//! End-to-end checks of the command-line interface: table shapes, flag/config
//! precedence, determinism, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphene-cs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn spectrum_lists_low_levels_and_gaps() {
    let out = run(&["spectrum", "--n-max", "3"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["n", "energy", "gap"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][1], 0.0);
    assert_eq!(rows[1][1], 0.0);
    assert!((rows[2][1] - 2.0_f64.sqrt()).abs() < 1e-15);
    assert!((rows[3][1] - 6.0_f64.sqrt()).abs() < 1e-15);
}

#[test]
fn monolayer_spectrum_is_square_root() {
    let out = run(&["spectrum", "--system", "monolayer", "--n-max", "4"]);
    let (_, rows) = parse_csv(&stdout(&out));
    let expect = [0.0, 1.0, 2.0_f64.sqrt(), 3.0_f64.sqrt(), 2.0];
    for (row, e) in rows.iter().zip(expect) {
        assert!((row[1] - e).abs() < 1e-15);
    }
}

#[test]
fn coherent_table_is_normalized() {
    let out = run(&["coherent", "--family", "B", "--r", "1.0"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["n", "re", "im", "weight"]);
    assert_eq!(rows[0][3], 0.0); // family B drops the n = 0 level
    let total: f64 = rows.iter().map(|r| r[3]).sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn uncertainty_rows_respect_the_floor() {
    let out = run(&["uncertainty", "--family", "A", "--r", "0:1:0.5", "--theta", "0,1.0"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header,
        ["r", "theta", "mean_q", "mean_p", "mean_q2", "mean_p2", "product"]
    );
    assert_eq!(rows.len(), 3 * 2);
    for row in &rows {
        assert!(row[6] >= 0.5 - 1e-9);
    }
    // r -> 0 row sits at the minimal product.
    assert!((rows[0][6] - 0.5).abs() < 1e-9);
}

#[test]
fn profile_theta_zero_has_no_x_current() {
    let out = run(&["profile", "--family", "A", "--theta", "0"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["theta", "x", "rho", "jx", "jy"]);
    let max_jx = rows.iter().map(|r| r[3].abs()).fold(0.0, f64::max);
    let max_jy = rows.iter().map(|r| r[4].abs()).fold(0.0, f64::max);
    assert!(max_jx < 1e-10, "max|jx| = {max_jx}");
    assert!(max_jy > 1e-3);
}

#[test]
fn evolve_frames_cover_requested_times() {
    let out = run(&[
        "evolve",
        "--family",
        "C",
        "--times",
        "0,3.141592653589793",
        "--grid-points",
        "101",
        "--grid-min",
        "-12",
        "--grid-max",
        "8",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["x", "t", "rho"]);
    assert_eq!(rows.len(), 202);
    assert!(rows.iter().all(|r| r[2] >= -1e-12));
}

#[test]
fn energy_table_scales_with_field() {
    let out = run(&["energy", "--family", "A", "--r", "0:1:0.5", "--b-field", "0.25,0.125"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["b_field", "r", "energy"]);
    assert_eq!(rows.len(), 6);
    // Same r, halved field -> halved energy.
    let big = rows.iter().find(|r| r[0] == 0.25 && r[1] == 1.0).unwrap()[2];
    let small = rows.iter().find(|r| r[0] == 0.125 && r[1] == 1.0).unwrap()[2];
    assert!((small - 0.5 * big).abs() < 1e-12);
    // Monotone growth along r at fixed field.
    assert!(rows[0][2] <= rows[1][2] && rows[1][2] <= rows[2][2]);
}

#[test]
fn period_reports_exact_and_rounded_tau() {
    let out = run(&["period", "--family", "A", "--r", "1"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header,
        ["mean_energy", "level_below", "level_above", "tau", "tau_rounded_pi", "revival_l2"]
    );
    let row = &rows[0];
    assert!((row[3] - std::f64::consts::SQRT_2 * std::f64::consts::PI).abs() < 1e-12);
    assert!((row[0] - 0.76).abs() < 0.005);
    assert!(row[5] > 0.0);
}

#[test]
fn identical_configuration_gives_byte_identical_output() {
    let args = ["uncertainty", "--family", "B", "--r", "0:2:0.5", "--theta", "0:6.3:1.0"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join(format!("gcs-cli-test-{}.conf", std::process::id()));
    std::fs::write(&path, "family = B\nr = 2.0\ntheta = 0.0\n# comment\nn-max = 5\n").unwrap();

    let from_config = run(&["coherent", "--config", path.to_str().unwrap()]);
    assert!(from_config.status.success());
    let (_, rows) = parse_csv(&stdout(&from_config));
    assert_eq!(rows[0][3], 0.0, "family B from config: no n = 0 weight");

    // The flag overrides the config file.
    let overridden = run(&["coherent", "--config", path.to_str().unwrap(), "--family", "A"]);
    assert!(overridden.status.success());
    let (_, rows) = parse_csv(&stdout(&overridden));
    assert!(rows[0][3] > 0.0, "family A from flag keeps n = 0 weight");

    std::fs::remove_file(&path).ok();
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let path = std::env::temp_dir().join(format!("gcs-out-{}.csv", std::process::id()));
    let out = run(&["spectrum", "--n-max", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,energy,gap\n"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn validation_errors_exit_with_code_1() {
    for args in [
        vec!["spectrum", "--system", "trilayer"],
        vec!["coherent", "--family", "Z"],
        vec!["coherent", "--family", "A", "--f", "shift1"], // family/f mismatch
        vec!["uncertainty", "--r", "nonsense"],
        vec!["profile", "--grid-points", "4"],
        vec!["spectrum", "--no-such-flag"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_code_2() {
    // A grid far too narrow for the state triggers the coverage check.
    let out = run(&["profile", "--family", "A", "--grid-min", "-2.5", "--grid-max", "-1.5",
        "--grid-points", "64", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unknown_config_key_is_rejected() {
    let path = std::env::temp_dir().join(format!("gcs-bad-{}.conf", std::process::id()));
    std::fs::write(&path, "no-such-key = 1\n").unwrap();
    let out = run(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_file(&path).ok();
}
