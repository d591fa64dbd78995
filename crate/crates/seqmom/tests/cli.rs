//! End-to-end behavior of the `seqmom` binary: exit codes, flag handling,
//! config-file merging, and the CSV contract.

use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqmom"))
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let output = binary().args(["sweep", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn inverted_grid_bounds_are_a_usage_error() {
    let output = binary()
        .args(["sweep", "--start", "2.0", "--end", "1.0", "--points", "3"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("start"));
}

#[test]
fn single_point_grid_is_a_usage_error() {
    let output = binary()
        .args(["sweep", "--points", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_engine_is_a_usage_error() {
    let output = binary()
        .args(["sweep", "--points", "3", "--engines", "warp"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("unknown engine"));
}

#[test]
fn bad_epsilon_is_a_usage_error() {
    let output = binary()
        .args(["sweep", "--points", "3", "--epsilon", "1.5"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_fails_with_io_exit() {
    let output = binary()
        .args([
            "sweep",
            "--points",
            "3",
            "--engines",
            "analytic",
            "--out",
            "/nonexistent-dir/result.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn sweep_to_stdout_has_expected_values() {
    let output = binary()
        .args(["sweep", "--points", "3", "--engines", "analytic,lueders,moments"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);

    // Row at ωΔt = π/2: max_gap = sin²(π/2)/8 = 0.125.
    let fields: Vec<f64> = rows[2]
        .split(',')
        .map(|f| f.parse::<f64>().unwrap())
        .collect();
    assert_eq!(fields.len(), 27);
    let max_gap = fields[24];
    assert!((max_gap - 0.125).abs() < 1e-10, "max_gap = {max_gap}");

    // Row at ωΔt = 0: direct and inverted tables identical.
    let first: Vec<f64> = rows[1]
        .split(',')
        .map(|f| f.parse::<f64>().unwrap())
        .collect();
    for i in 0..8 {
        assert!((first[1 + i] - first[9 + i]).abs() < 1e-12);
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.conf");
    std::fs::write(
        &config_path,
        "# three points over [0, pi]\nstart = 0.0\nend = 3.141592653589793\npoints = 5\nengines = analytic\n",
    )
    .unwrap();

    let from_file = binary()
        .args(["sweep", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(from_file.status.success());
    let text = String::from_utf8(from_file.stdout).unwrap();
    assert_eq!(text.lines().count(), 6); // header + 5 rows

    // An explicit flag wins over the file value.
    let overridden = binary()
        .args(["sweep", "--points", "2", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(overridden.status.success());
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn malformed_config_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.conf");
    std::fs::write(&config_path, "points: 5\n").unwrap();
    let output = binary()
        .args(["sweep", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn compare_prints_the_expected_table_row() {
    let output = binary()
        .args(["compare", "1.0471975511965976"]) // π/3
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    // The (+1,−1,+1) row: P_d = 0.03125, P_μ = −0.0625, difference 0.09375.
    assert!(text.contains("0.03125000"));
    assert!(text.contains("-0.06250000"));
    assert!(text.contains("0.09375000"));
    assert!(text.contains("negativity certificate"));
}

#[test]
fn compare_at_zero_reports_compatibility() {
    let output = binary().args(["compare", "0.0"]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("compatible"));
}

#[test]
fn compare_reports_small_circuit_residuals() {
    let output = binary()
        .args(["compare", "1.5707963267948966"]) // π/2
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let residual_line = text
        .lines()
        .find(|l| l.contains("INRM"))
        .expect("report lists the INRM residual");
    let value: f64 = residual_line
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .expect("residual parses as a number");
    assert!(value < 1e-10, "INRM residual {value}");
}

#[test]
fn compare_rejects_bad_epsilon() {
    let output = binary()
        .args(["compare", "1.0", "--epsilon", "0.0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn selftest_prints_one_line_per_property() {
    let output = binary().arg("selftest").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let pass_lines = text.lines().filter(|l| l.starts_with("PASS")).count();
    assert_eq!(pass_lines, 8);
    assert!(!text.contains("FAIL"));
}
