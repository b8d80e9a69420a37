use std::collections::HashMap;
use std::process::{Command, Output};

use logkg::stability::StabilityReport;
use logkg::PeriodicProfile;
use logkg_cli::commands::{SimulationReport, SpectrumReport, SweepRecord, TableReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logkg")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV document keyed by header name; `#` lines are skipped.
fn csv_rows(text: &str) -> Vec<HashMap<String, String>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| headers.iter().zip(r.unwrap().iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect())
        .collect()
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

fn assert_round_trip<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) {
    let value: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<T>(&again).unwrap(), value);
}

#[test]
fn table_has_the_reference_columns_and_rows() {
    let text = stdout(&["table"]);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "p,phi0,dphi0,ddphi0,ybar0,L0,ybarL,dybarL,theta");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 9);
    for r in &rows {
        assert_eq!(num(r, "dphi0"), 0.0);
        assert!((num(r, "ybar0") + 1.0 / num(r, "ddphi0")).abs() < 1e-6 * num(r, "ybar0").abs());
    }
    let by_p = |p: &str| rows.iter().find(|r| r["p"] == p).unwrap();
    assert!((num(by_p("10"), "L0") - 2.0570).abs() < 1e-3);
    assert!((num(by_p("10"), "theta") + 0.0881).abs() < 1e-3);
    assert!((num(by_p("20"), "theta") + 0.0402).abs() < 1e-3);
    assert!((num(by_p("1"), "ddphi0") + 0.4157).abs() < 1e-4);
}

#[test]
fn table_accepts_custom_rows_and_rejects_inadmissible_ones() {
    let rows = csv_rows(&stdout(&["table", "--rows", "3:1.5,2:1.6", "--c", "0.6"]));
    assert_eq!(rows.len(), 2);
    let out = run(&["table", "--rows", "3:9.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("validation: rows:"));
}

#[test]
fn wave_peaks_at_the_origin() {
    let rows = csv_rows(&stdout(&["wave", "--p", "1", "--c", "0.5", "--amplitude", "2.5", "--grid", "64"]));
    assert_eq!(rows.len(), 64);
    assert_eq!(num(&rows[0], "x"), 0.0);
    assert_eq!(num(&rows[0], "phi"), 2.5);
    assert!(rows.iter().all(|r| num(r, "phi") <= 2.5));
}

#[test]
fn stability_verdict_of_the_reference_wave() {
    let text = stdout(&["stability", "--p", "1", "--c", "0.6", "--period", "6.3129", "--grid", "128", "--modes", "128"]);
    let report: StabilityReport = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{:?}", report.verdict), "Stable");
    assert_round_trip::<StabilityReport>(&text);
}

#[test]
fn unperturbed_simulation_stays_on_orbit() {
    let text = stdout(&[
        "simulate", "--p", "1", "--c", "0.6", "--period", "6.3129", "--epsilon", "0", "--t-end", "2", "--cadence", "0.25",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| num(r, "rho") < 1e-6));
    assert_eq!(
        text.lines().find(|l| !l.starts_with('#')).unwrap(),
        "t,energy,momentum,lyapunov_gap,rho,y,theta"
    );
}

#[test]
fn json_reports_round_trip() {
    let wave = stdout(&["wave", "--p", "2", "--c", "0.8", "--period", "5", "--grid", "32", "--format", "json"]);
    assert_round_trip::<PeriodicProfile>(&wave);
    let spectrum = stdout(&["spectrum", "--p", "1", "--c", "0.5", "--amplitude", "2.5", "--grid", "64", "--modes", "64"]);
    assert_round_trip::<SpectrumReport>(&spectrum);
    let table = stdout(&["table", "--format", "json"]);
    assert_round_trip::<TableReport>(&table);
    let sim = stdout(&[
        "simulate", "--p", "1", "--c", "0.6", "--period", "6.3129", "--grid", "64", "--epsilon", "1e-3", "--t-end", "0.5",
        "--format", "json",
    ]);
    assert_round_trip::<SimulationReport>(&sim);
    let sweep = stdout(&[
        "sweep", "--p", "1", "--period", "6.3129", "--c-min", "0.55", "--c-max", "0.95", "--c-steps", "3", "--grid", "64",
        "--modes", "64", "--format", "json",
    ]);
    let lines: Vec<&str> = sweep.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let record: SweepRecord = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&record).unwrap(), line);
    }
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["table"],
        vec!["sweep", "--p", "1", "--period", "6.3129", "--c-min", "0.3", "--c-max", "0.9", "--c-steps", "5", "--grid", "64", "--modes", "64"],
        vec!["simulate", "--p", "1", "--c", "0.6", "--period", "6.3129", "--grid", "64", "--epsilon", "1e-3", "--t-end", "1"],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# wave run\np = 1\nc = 0.5\namplitude = 2.5  # table row\ngrid = 16\nformat = csv\n").unwrap();
    let out = dir.path().join("wave.csv");
    let cfg_s = cfg.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    let printed = stdout(&["wave", "--config", cfg_s, "--grid", "8", "--out", out_s]);
    assert!(printed.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# grid=8\n"));
    assert_eq!(csv_rows(&text).len(), 8);
    std::fs::write(&cfg, "p = 1\nspeed = 0.5\n").unwrap();
    let bad = run(&["wave", "--config", cfg_s]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes_and_one_line_reasons() {
    for args in [
        vec!["wave", "--p", "1", "--c", "0.5", "--amplitude", "5"],
        vec!["wave", "--p", "1", "--c", "0.5", "--period", "6"],
        vec!["wave", "--p", "1", "--c", "0.5"],
        vec!["wave", "--p", "0", "--c", "0.5", "--amplitude", "1"],
        vec!["wave", "--p", "x"],
        vec!["wave", "--amplitude", "2", "--period", "7"],
        vec!["simulate", "--p", "1", "--c", "0.6", "--period", "6.3129", "--dt", "-1"],
        vec!["stability", "--p", "1", "--c", "0.6", "--period", "6.3129", "--grid", "7"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("validation: "), "{err}");
    }
    // the even-unstable wave grows until the field overflows
    let out = run(&[
        "simulate", "--p", "1", "--c", "0.3", "--period", "6.3129", "--grid", "64", "--epsilon", "1e-3", "--dt", "1e-2",
        "--t-end", "150", "--cadence", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("numerical: "), "{err}");
    assert_eq!(err.lines().count(), 1);
}
