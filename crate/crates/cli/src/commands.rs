//! The six subcommands. Each returns the rendered document plus an optional
//! deferred failure (rows or sweep points that could not be computed).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use logkg::evolution::{evolve, standing_wave_state, Diagnostics, EvolveConfig, PerturbationShape};
use logkg::spectral::{
    floquet_theta, hill_report, kernel_residual, lambda0_closed_form, matrix_operator_eigenvalues, HillOperator,
    HillReport, MatrixOperator, DEFAULT_ZERO_TOLERANCE,
};
use logkg::stability::{analyze, StabilityReport};
use logkg::standing_waves::{amplitude_for_period, period_by_quadrature, shoot_wave};
use logkg::{Complex64, PeriodicProfile, WaveParams};

use crate::config::{Format, Settings};
use crate::error::CliError;
use crate::output::{csv, float, json, json_lines};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_MODES: usize = 256;
pub const DEFAULT_DT: f64 = 5e-4;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_CADENCE: f64 = 0.1;
pub const DEFAULT_C_STEPS: usize = 11;
pub const TABLE_C0: f64 = 0.5;
/// Eigenvalues listed per operator by `spectrum`.
pub const REPORTED_EIGENVALUES: usize = 8;

/// Reference table inputs `(p, phi(0))` at `c0 = 0.5`.
pub const TABLE_ROWS: [(u32, f64); 9] = [
    (1, 2.5),
    (2, 1.5),
    (3, 1.5),
    (4, 1.5),
    (5, 1.5),
    (6, 1.5),
    (8, 1.5),
    (10, 1.5),
    (20, 1.5),
];

pub struct Rendered {
    pub text: String,
    /// Reported after the output is written.
    pub deferred: Option<CliError>,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, deferred: None }
    }
}

fn require<T>(value: Option<T>, field: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::validation(field, "missing"))
}

fn positive(value: f64, field: &str) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::validation(field, format!("must be finite and positive, got {value}")))
    }
}

fn even_size(value: usize, minimum: usize, field: &str) -> Result<usize, CliError> {
    if value >= minimum && value.is_multiple_of(2) {
        Ok(value)
    } else {
        Err(CliError::validation(field, format!("must be even and >= {minimum}, got {value}")))
    }
}

fn params(s: &Settings) -> Result<WaveParams, CliError> {
    let p = require(s.p()?, "p")?;
    let c = require(s.c()?, "c")?;
    WaveParams::new(p, c).map_err(|e| CliError::from_core("p", e))
}

fn grid(s: &Settings) -> Result<usize, CliError> {
    even_size(s.grid()?.unwrap_or(DEFAULT_GRID), 4, "grid")
}

fn modes(s: &Settings) -> Result<usize, CliError> {
    even_size(s.modes()?.unwrap_or(DEFAULT_MODES), 8, "modes")
}

fn format(s: &Settings, default: Format) -> Result<Format, CliError> {
    Ok(s.format()?.unwrap_or(default))
}

/// Amplitude from `--amplitude`, or solved from `--period`.
fn amplitude(s: &Settings, params: &WaveParams) -> Result<f64, CliError> {
    match (s.amplitude()?, s.period()?) {
        (Some(a), None) => Ok(a),
        (None, Some(l)) => {
            positive(l, "period")?;
            amplitude_for_period(params, l).map_err(|e| CliError::from_core("period", e))
        }
        (None, None) => Err(CliError::validation("amplitude", "one of amplitude or period is required")),
        (Some(_), Some(_)) => Err(CliError::validation("amplitude", "amplitude and period are mutually exclusive")),
    }
}

fn profile(s: &Settings, params: &WaveParams, n: usize) -> Result<PeriodicProfile, CliError> {
    let amp = amplitude(s, params)?;
    shoot_wave(params, amp, n)
        .map(|shot| shot.profile)
        .map_err(|e| CliError::from_core("amplitude", e))
}

fn wave_meta(command: &str, profile: &PeriodicProfile) -> Vec<(&'static str, String)> {
    vec![
        ("command", command.to_string()),
        ("p", profile.params.p.to_string()),
        ("c", float(profile.params.c)),
        ("amplitude", float(profile.amplitude)),
        ("period", float(profile.period)),
        ("grid", profile.grid.n.to_string()),
    ]
}

/// Columns of the Floquet table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u32,
    pub phi0: f64,
    pub dphi0: f64,
    pub ddphi0: f64,
    pub ybar0: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "ybarL")]
    pub ybar_l: f64,
    #[serde(rename = "dybarL")]
    pub dybar_l: f64,
    pub theta: f64,
}

pub const TABLE_COLUMNS: [&str; 9] = ["p", "phi0", "dphi0", "ddphi0", "ybar0", "L0", "ybarL", "dybarL", "theta"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub p: u32,
    pub amplitude: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub c0: f64,
    pub rows: Vec<TableRow>,
    pub failures: Vec<RowFailure>,
}

fn parse_rows(text: &str) -> Result<Vec<(u32, f64)>, CliError> {
    text.split(',')
        .map(|item| {
            let (p, a) = item
                .split_once(':')
                .ok_or_else(|| CliError::validation("rows", format!("expected p:amplitude, got {item:?}")))?;
            let p = p.trim().parse().map_err(|_| CliError::validation("rows", format!("bad p in {item:?}")))?;
            let a = a.trim().parse().map_err(|_| CliError::validation("rows", format!("bad amplitude in {item:?}")))?;
            Ok((p, a))
        })
        .collect()
}

/// One table row for the wave through `(amplitude, 0)`.
pub fn table_row(params: &WaveParams, amplitude: f64) -> logkg::Result<TableRow> {
    let shot = shoot_wave(params, amplitude, 16)?;
    let f = floquet_theta(&shot.profile)?;
    Ok(TableRow {
        p: f.row.p,
        phi0: f.row.phi0,
        dphi0: f.row.dphi0,
        ddphi0: f.row.ddphi0,
        ybar0: f.row.ybar0,
        l0: f.row.period,
        ybar_l: f.row.ybar_l,
        dybar_l: f.row.dybar_l,
        theta: f.row.theta,
    })
}

pub fn table(s: &Settings) -> Result<Rendered, CliError> {
    let c0 = s.c()?.unwrap_or(TABLE_C0);
    let inputs = match s.rows()? {
        Some(text) => parse_rows(&text)?,
        None => TABLE_ROWS.to_vec(),
    };
    // admissibility is checked for every row before any work
    let mut checked = Vec::with_capacity(inputs.len());
    for (p, a) in inputs {
        let params = WaveParams::new(p, c0).map_err(|e| CliError::from_core("rows", e))?;
        let (lo, hi) = logkg::standing_waves::amplitude_window(&params);
        if !(a >= lo && a <= hi) {
            return Err(CliError::validation("rows", format!("p = {p}: amplitude {a} outside ({lo}, {hi})")));
        }
        checked.push((params, a));
    }
    let mut report = TableReport {
        c0,
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (params, a) in checked {
        match table_row(&params, a) {
            Ok(row) => report.rows.push(row),
            Err(e) => report.failures.push(RowFailure {
                p: params.p,
                amplitude: a,
                error: e.to_string(),
            }),
        }
    }
    let deferred = (!report.failures.is_empty())
        .then(|| CliError::Numerical(format!("{} table row(s) failed", report.failures.len())));
    let text = match format(s, Format::Csv)? {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut meta = vec![("command", "table".to_string()), ("c0", float(c0))];
            for f in &report.failures {
                meta.push(("error", format!("p={} amplitude={}: {}", f.p, float(f.amplitude), f.error)));
            }
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    let mut v = vec![r.p.to_string()];
                    v.extend([r.phi0, r.dphi0, r.ddphi0, r.ybar0, r.l0, r.ybar_l, r.dybar_l, r.theta].map(float));
                    v
                })
                .collect();
            csv(&meta, &TABLE_COLUMNS, &rows)?
        }
    };
    Ok(Rendered { text, deferred })
}

pub fn wave(s: &Settings) -> Result<Rendered, CliError> {
    let params = params(s)?;
    let prof = profile(s, &params, grid(s)?)?;
    let text = match format(s, Format::Csv)? {
        Format::Json => json(&prof)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = prof
                .grid
                .nodes()
                .zip(prof.phi.iter().zip(&prof.dphi))
                .map(|(x, (f, d))| vec![float(x), float(*f), float(*d)])
                .collect();
            csv(&wave_meta("wave", &prof), &["x", "phi", "dphi"], &rows)?
        }
    };
    Ok(Rendered::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: WaveParams,
    pub amplitude: f64,
    pub period: f64,
    pub modes: usize,
    pub l1: HillReport,
    pub l2: HillReport,
    /// `ybar(L)/phi''(0)`, shown next to the Floquet constant.
    pub theta_value_quotient: f64,
    pub re_eigenvalues: Vec<f64>,
    pub im_eigenvalues: Vec<f64>,
    pub lambda0: f64,
    pub lambda0_m: f64,
    pub re_kernel_residual: f64,
    pub im_kernel_residual: f64,
}

pub fn spectrum(s: &Settings) -> Result<Rendered, CliError> {
    let params = params(s)?;
    let modes = modes(s)?;
    let prof = profile(s, &params, grid(s)?)?;
    let num = |e: logkg::Error| CliError::from_core("amplitude", e);
    let m = REPORTED_EIGENVALUES;
    let re = MatrixOperator::re(&prof);
    let im = MatrixOperator::im(&prof);
    let (lambda0, lambda0_m) = lambda0_closed_form(params.p, params.c);
    let report = SpectrumReport {
        params,
        amplitude: prof.amplitude,
        period: prof.period,
        modes,
        l1: hill_report(&HillOperator::l1(&prof), m, modes, DEFAULT_ZERO_TOLERANCE).map_err(num)?,
        l2: hill_report(&HillOperator::l2(&prof), m, modes, DEFAULT_ZERO_TOLERANCE).map_err(num)?,
        theta_value_quotient: floquet_theta(&prof).map_err(num)?.theta_value_quotient,
        re_eigenvalues: matrix_operator_eigenvalues(&re, m, modes).map_err(num)?,
        im_eigenvalues: matrix_operator_eigenvalues(&im, m, modes).map_err(num)?,
        lambda0,
        lambda0_m,
        re_kernel_residual: kernel_residual(&re, modes).map_err(num)?,
        im_kernel_residual: kernel_residual(&im, modes).map_err(num)?,
    };
    let text = match format(s, Format::Json)? {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut meta = wave_meta("spectrum", &prof);
            meta.extend([
                ("modes", modes.to_string()),
                ("theta", float(report.l1.theta)),
                ("theta_value_quotient", float(report.theta_value_quotient)),
                ("l1_index", format!("{}:{}", report.l1.n_negative, report.l1.n_zero)),
                ("l2_index", format!("{}:{}", report.l2.n_negative, report.l2.n_zero)),
                ("lambda0", float(lambda0)),
            ]);
            let rows: Vec<Vec<String>> = (0..m)
                .map(|i| {
                    vec![
                        i.to_string(),
                        float(report.l1.eigenvalues[i]),
                        float(report.l2.eigenvalues[i]),
                        float(report.re_eigenvalues[i]),
                        float(report.im_eigenvalues[i]),
                    ]
                })
                .collect();
            csv(&meta, &["index", "l1", "l2", "re", "im"], &rows)?
        }
    };
    Ok(Rendered::ok(text))
}

/// Period from `--period`, or from the amplitude by quadrature.
fn period(s: &Settings, params: &WaveParams) -> Result<f64, CliError> {
    match (s.period()?, s.amplitude()?) {
        (Some(l), None) => positive(l, "period"),
        (None, Some(a)) => period_by_quadrature(params, a).map_err(|e| CliError::from_core("amplitude", e)),
        (None, None) => Err(CliError::validation("period", "one of amplitude or period is required")),
        (Some(_), Some(_)) => Err(CliError::validation("amplitude", "amplitude and period are mutually exclusive")),
    }
}

const STABILITY_COLUMNS: [&str; 16] = [
    "p", "c", "period", "l2_norm_sq", "d2", "d2_fd", "lambda0", "beta", "gamma_min", "kappa", "re_n", "re_z", "im_n",
    "im_z", "verdict", "error",
];

fn stability_row(p: u32, c: f64, report: Option<&StabilityReport>, error: Option<&str>) -> Vec<String> {
    let mut row = vec![p.to_string(), float(c)];
    match report {
        Some(r) => {
            row.extend([r.period, r.l2_norm_sq, r.d2, r.d2_fd, r.lambda0, r.beta, r.gamma_min, r.kappa].map(float));
            row.extend([r.re_index.0, r.re_index.1, r.im_index.0, r.im_index.1].map(|v| v.to_string()));
            row.push(format!("{:?}", r.verdict));
        }
        None => row.extend(std::iter::repeat_n(String::new(), 13)),
    }
    row.push(error.unwrap_or("").to_string());
    row
}

pub fn stability(s: &Settings) -> Result<Rendered, CliError> {
    let params = params(s)?;
    let l = period(s, &params)?;
    let (n, m) = (grid(s)?, modes(s)?);
    let report = analyze(&params, l, n, m).map_err(|e| CliError::from_core("period", e))?;
    let text = match format(s, Format::Json)? {
        Format::Json => json(&report)?,
        Format::Csv => {
            let meta = vec![
                ("command", "stability".to_string()),
                ("grid", n.to_string()),
                ("modes", m.to_string()),
            ];
            csv(&meta, &STABILITY_COLUMNS, &[stability_row(params.p, params.c, Some(&report), None)])?
        }
    };
    Ok(Rendered::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub params: WaveParams,
    pub amplitude: f64,
    pub period: f64,
    pub grid: usize,
    pub dt: f64,
    pub t_end: f64,
    pub epsilon: f64,
    pub mode: u32,
    pub series: Vec<Diagnostics>,
}

pub const SIMULATION_COLUMNS: [&str; 7] = ["t", "energy", "momentum", "lyapunov_gap", "rho", "y", "theta"];

pub fn simulate(s: &Settings) -> Result<Rendered, CliError> {
    let params = params(s)?;
    let prof = profile(s, &params, grid(s)?)?;
    let dt = positive(s.dt()?.unwrap_or(DEFAULT_DT), "dt")?;
    let t_end = positive(s.t_end()?.unwrap_or(DEFAULT_T_END), "t-end")?;
    let cadence = positive(s.cadence()?.unwrap_or(DEFAULT_CADENCE), "cadence")?;
    let epsilon = s.epsilon()?.unwrap_or(0.0);
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::validation("epsilon", format!("must be finite and non-negative, got {epsilon}")));
    }
    let mode = s.mode()?.unwrap_or(2);
    let shape = PerturbationShape::Cosine(mode);
    let w = shape.samples(&prof).map_err(|e| CliError::from_core("mode", e))?;
    let mut state = standing_wave_state(&prof).map_err(|e| CliError::from_core("amplitude", e))?;
    for (u, d) in state.u.iter_mut().zip(&w) {
        *u += Complex64::new(epsilon * d, 0.0);
    }
    let config = EvolveConfig {
        p: params.p,
        dt,
        t_end,
        cadence,
        reference: Some(&prof),
        stop_distance: None,
    };
    let (_, series) = evolve(&state, &config).map_err(|e| CliError::from_core("dt", e))?;
    let report = SimulationReport {
        params,
        amplitude: prof.amplitude,
        period: prof.period,
        grid: prof.grid.n,
        dt,
        t_end,
        epsilon,
        mode,
        series,
    };
    let text = match format(s, Format::Csv)? {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut meta = wave_meta("simulate", &prof);
            meta.extend([
                ("dt", float(dt)),
                ("t_end", float(t_end)),
                ("epsilon", float(epsilon)),
                ("mode", mode.to_string()),
            ]);
            let opt = |v: Option<f64>| v.map(float).unwrap_or_default();
            let rows: Vec<Vec<String>> = report
                .series
                .iter()
                .map(|d| {
                    vec![
                        float(d.time),
                        float(d.energy),
                        float(d.momentum),
                        opt(d.lyapunov_gap),
                        opt(d.orbital_distance),
                        opt(d.shift),
                        opt(d.phase),
                    ]
                })
                .collect();
            csv(&meta, &SIMULATION_COLUMNS, &rows)?
        }
    };
    Ok(Rendered::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p: u32,
    pub c: f64,
    pub period: f64,
    pub report: Option<StabilityReport>,
    pub error: Option<String>,
}

pub fn sweep(s: &Settings) -> Result<Rendered, CliError> {
    let p = require(s.p()?, "p")?;
    if s.amplitude()?.is_some() {
        return Err(CliError::validation("amplitude", "sweep runs at fixed period; give period"));
    }
    let l = positive(require(s.period()?, "period")?, "period")?;
    let c_min = require(s.c_min()?, "c-min")?;
    let c_max = require(s.c_max()?, "c-max")?;
    if !(c_min.is_finite() && c_max.is_finite() && c_min <= c_max) {
        return Err(CliError::validation("c-min", "need finite c-min <= c-max"));
    }
    let steps = s.c_steps()?.unwrap_or(DEFAULT_C_STEPS);
    if steps == 0 {
        return Err(CliError::validation("c-steps", "must be >= 1"));
    }
    let (n, m) = (grid(s)?, modes(s)?);
    WaveParams::new(p, c_min).map_err(|e| CliError::from_core("p", e))?;
    let cs: Vec<f64> = (0..steps)
        .map(|i| if steps == 1 { c_min } else { c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64 })
        .collect();
    let records: Vec<SweepRecord> = cs
        .par_iter()
        .map(|&c| {
            let result = WaveParams::new(p, c).and_then(|params| analyze(&params, l, n, m));
            match result {
                Ok(r) => SweepRecord { p, c, period: l, report: Some(r), error: None },
                Err(e) => SweepRecord { p, c, period: l, report: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let deferred = (failed > 0).then(|| CliError::Numerical(format!("{failed} sweep point(s) failed")));
    let text = match format(s, Format::Json)? {
        Format::Json => json_lines(&records)?,
        Format::Csv => {
            let meta = vec![
                ("command", "sweep".to_string()),
                ("period", float(l)),
                ("grid", n.to_string()),
                ("modes", m.to_string()),
            ];
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| stability_row(r.p, r.c, r.report.as_ref(), r.error.as_deref()))
                .collect();
            csv(&meta, &STABILITY_COLUMNS, &rows)?
        }
    };
    Ok(Rendered { text, deferred })
}
