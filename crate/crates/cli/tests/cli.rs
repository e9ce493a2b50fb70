use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hspec")).args(args).output().unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

/// Parse CSV text into a header and numeric rows.
fn numeric_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let ok = hspec(&["validate", "--n", "4", "--q", "2"]);
    assert_eq!(code(&ok), 0);
    assert!(!stdout(&ok).contains("equality"));

    let violated = hspec(&["validate", "--n", "3", "--q", "2.5"]);
    assert_eq!(code(&violated), 2);
    assert!(stdout(&violated).contains("Q <= n-1,false"));

    let equality = hspec(&["validate", "--n", "3", "--q", "2"]);
    assert_eq!(code(&equality), 0);
    assert!(stdout(&equality).contains("equality: isometric to RH^n(-1)"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(dir.path(), "bad.conf", "n = 4\nthis line has no separator\n");
    assert_eq!(code(&hspec(&["validate", "--config", &malformed])), 1);
    let unknown = write(dir.path(), "unknown.conf", "dimension = 4\n");
    assert_eq!(code(&hspec(&["validate", "--config", &unknown])), 1);
    assert_eq!(code(&hspec(&["validate", "--config", "/nonexistent/hspec.conf"])), 1);
    assert_eq!(code(&hspec(&["table", "--what", "density", "--format", "xml"])), 1);
    assert_eq!(code(&hspec(&["table", "--what", "density", "--r-max", "-2"])), 1);
    assert_eq!(code(&hspec(&["check", "--tol", "numeric=0"])), 1);
    assert_eq!(code(&hspec(&["validate", "--n", "four"])), 1);
    assert_eq!(code(&hspec(&["table", "--what", "volume"])), 1);

    let threads = Command::new(env!("CARGO_BIN_EXE_hspec"))
        .args(["validate"])
        .env("HSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 1);
}

#[test]
fn out_of_range_parameters_and_numerical_failures() {
    assert_eq!(code(&hspec(&["table", "--what", "phi", "--n", "3", "--q", "2.5"])), 2);
    let failed = hspec(&["transform", "--direction", "forward", "--tol", "forward=1e-30", "--lambda-steps", "1"]);
    assert_eq!(code(&failed), 3);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.conf", "# model\nn = 3\nq = 2   # unit curvature\nr_max = 2\nr_steps = 2\n");
    let (_, rows) = numeric_csv(&stdout(&hspec(&["table", "--what", "density", "--config", &config])));
    assert_eq!(rows.len(), 3);
    assert!((rows[1][1] - 1f64.sinh().powi(2)).abs() < 1e-15 * rows[1][1]);
    let (_, rows) =
        numeric_csv(&stdout(&hspec(&["table", "--what", "density", "--config", &config, "--n", "5", "--q", "4"])));
    // n = 5, Q = 4 is the unit-curvature model again
    assert!((rows[1][1] - 1f64.sinh().powi(4)).abs() < 1e-14 * rows[1][1]);
}

#[test]
fn density_table_matches_closed_form() {
    let output = hspec(&["table", "--what", "density", "--n", "3", "--q", "2", "--r-max", "3", "--r-steps", "30"]);
    assert_eq!(code(&output), 0);
    let (header, rows) = numeric_csv(&stdout(&output));
    assert_eq!(header, ["r", "density"]);
    assert_eq!(rows.len(), 31);
    let row = rows.iter().find(|row| row[0] == 1.0).unwrap();
    assert!((row[1] - 1f64.sinh().powi(2)).abs() < 1e-15 * row[1]);
    assert_eq!(rows[0][1], 0.0);
}

#[test]
fn sigma_table_at_origin_is_infinite() {
    let output = hspec(&["table", "--what", "sigma", "--r-steps", "4"]);
    let text = stdout(&output);
    assert!(text.lines().nth(1).unwrap().ends_with(",inf"));
    let json = hspec(&["table", "--what", "sigma", "--r-steps", "4", "--format", "json"]);
    let rows: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(rows[0]["sigma"], Value::Null);
    assert!(rows[4]["sigma"].as_f64().unwrap() > 2.0);
}

#[test]
fn phi_table_is_one_at_origin() {
    let output = hspec(&["table", "--what", "phi", "--n", "5", "--q", "3", "--lambda-steps", "10"]);
    assert_eq!(code(&output), 0);
    let (header, rows) = numeric_csv(&stdout(&output));
    assert_eq!(header.len(), 12);
    assert_eq!(rows[0][0], 0.0);
    assert!(rows[0][1..].iter().all(|&v| v == 1.0));
    assert!(rows.iter().flat_map(|row| &row[1..]).all(|v| v.abs() <= 1.0));
}

#[test]
fn cfun_table_has_positive_density() {
    let output = hspec(&["table", "--what", "cfun", "--n", "6", "--q", "3.5", "--lambda-steps", "25"]);
    let (header, rows) = numeric_csv(&stdout(&output));
    assert_eq!(header, ["lambda", "c_re", "c_im", "c_abs", "plancherel_density"]);
    assert_eq!(rows.len(), 25);
    for row in &rows {
        assert!(row[0] > 0.0 && row[4] > 0.0);
        assert!((row[3] - row[1].hypot(row[2])).abs() < 1e-15 * row[3]);
    }
}

#[test]
fn json_mirrors_csv() {
    let args = ["table", "--what", "phi", "--r-steps", "5", "--lambda-steps", "3"];
    let (header, rows) = numeric_csv(&stdout(&hspec(&args)));
    let json: Value = serde_json::from_slice(&hspec(&[&args[..], &["--format", "json"]].concat()).stdout).unwrap();
    let objects = json.as_array().unwrap();
    assert_eq!(objects.len(), rows.len());
    for (object, row) in objects.iter().zip(&rows) {
        let object = object.as_object().unwrap();
        assert_eq!(object.keys().collect::<Vec<_>>(), header.iter().collect::<Vec<_>>());
        for (value, expected) in object.values().zip(row) {
            assert_eq!(value.as_f64().unwrap(), *expected);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let args = ["transform", "--direction", "forward", "--n", "5", "--q", "3", "--lambda-steps", "12"];
    let run = |out: &Path, threads: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_hspec"))
            .args(args)
            .args(["--out", out.to_str().unwrap()])
            .env("HSPEC_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(out).unwrap()
    };
    let a = run(&first, "1");
    let b = run(&second, "3");
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn roundtrip_error_column_is_small() {
    let output = hspec(&["transform", "--direction", "roundtrip", "--n", "4", "--q", "2", "--r-max", "3", "--r-steps", "30"]);
    assert_eq!(code(&output), 0);
    let (header, rows) = numeric_csv(&stdout(&output));
    assert_eq!(header, ["r", "input", "recovered", "error"]);
    let worst = rows.iter().map(|row| row[3]).fold(0.0, f64::max);
    assert!(worst < 1e-4, "max error {worst}");
    assert!(rows.iter().all(|row| (row[3] - (row[2] - row[1]).abs()).abs() == 0.0));
}

#[test]
fn forward_of_zero_is_zero() {
    let output = hspec(&["transform", "--direction", "forward", "--function", "zero", "--lambda-steps", "8"]);
    let (_, rows) = numeric_csv(&stdout(&output));
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|row| row[1] == 0.0 && row[2] == 0.0));
}

#[test]
fn abel_output_is_even() {
    let output = hspec(&["transform", "--direction", "abel", "--function", "gaussian", "--support", "1.5", "--r-steps", "12"]);
    assert_eq!(code(&output), 0);
    let (header, rows) = numeric_csv(&stdout(&output));
    assert_eq!(header, ["t", "abel"]);
    assert_eq!(rows.len(), 25);
    let scale = rows[12][1].abs();
    assert!(scale > 0.0);
    for k in 0..rows.len() {
        let mirror = &rows[rows.len() - 1 - k];
        assert_eq!(rows[k][0], -mirror[0]);
        assert!((rows[k][1] - mirror[1]).abs() <= 1e-12 * scale);
    }
}

#[test]
fn sampled_input_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let step = 1.0 / 1024.0;
    let mut text = String::from("r,value\n");
    for k in 0..=1024 {
        let x = k as f64 * step;
        let value = if x < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
        text.push_str(&format!("{x},{value}\n"));
    }
    let samples = write(dir.path(), "bump.csv", &text);
    let output = hspec(&[
        "transform", "--direction", "roundtrip", "--function", "samples", "--samples", &samples, "--r-max", "1.5",
        "--r-steps", "15",
    ]);
    assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));
    let (_, rows) = numeric_csv(&stdout(&output));
    let worst = rows.iter().map(|row| row[3]).fold(0.0, f64::max);
    assert!(worst < 1e-4, "max error {worst}");

    let uneven = write(dir.path(), "uneven.csv", "0,1\n0.5,1\n0.7,0\n");
    let output = hspec(&["transform", "--direction", "forward", "--function", "samples", "--samples", &uneven]);
    assert_eq!(code(&output), 1);
}

#[test]
fn check_suite_default_and_broken_tolerance() {
    let output = hspec(&["check"]);
    assert_eq!(code(&output), 0, "{}", stdout(&output));
    let text = stdout(&output);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
    assert!(!text.contains("Poisson"));

    let broken = hspec(&["check", "--tol", "transform=1e-30"]);
    assert_ne!(code(&broken), 0);
    assert!(stdout(&broken).contains(",false,"));
}

#[test]
fn check_suite_hyperbolic_cross_checks() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "hyperbolic.conf", "n = 3\nq = 2\nformat = json\n");
    let output = hspec(&["check", "--config", &config]);
    assert_eq!(code(&output), 0, "{}", stdout(&output));
    let rows: Value = serde_json::from_slice(&output.stdout).unwrap();
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|row| row["check"].as_str().unwrap()).collect();
    assert!(names.contains(&"phi = Poisson boundary average"));
    assert!(names.contains(&"spectral convolution = direct convolution"));
    assert!(rows.as_array().unwrap().iter().all(|row| row["passed"] == Value::Bool(true)));
}
