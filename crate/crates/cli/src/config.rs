//! Run configuration: `key=value` files merged under command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("expected csv or json, got {s:?}")),
        }
    }
}

/// Flags shared by every subcommand. Each one may also be given in the
/// `--config` file under the same name without the dashes.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Nonlinearity power p >= 1.
    #[arg(long)]
    pub p: Option<u32>,
    /// Wave speed c.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Turning-point amplitude phi(0).
    #[arg(long, conflicts_with = "period")]
    pub amplitude: Option<f64>,
    /// Period L of the wave.
    #[arg(long)]
    pub period: Option<f64>,
    /// Fourier modes of the eigen-solves.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Grid points per period.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Perturbation size.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Time between diagnostic samples.
    #[arg(long)]
    pub cadence: Option<f64>,
    /// Cosine mode of the perturbation.
    #[arg(long)]
    pub mode: Option<u32>,
    /// Sweep range start.
    #[arg(long = "c-min", allow_hyphen_values = true)]
    pub c_min: Option<f64>,
    /// Sweep range end.
    #[arg(long = "c-max", allow_hyphen_values = true)]
    pub c_max: Option<f64>,
    /// Number of sweep points.
    #[arg(long = "c-steps")]
    pub c_steps: Option<usize>,
    /// Table rows as `p:amplitude` pairs separated by commas.
    #[arg(long)]
    pub rows: Option<String>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// key=value configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "p", "c", "amplitude", "period", "modes", "grid", "dt", "t-end", "epsilon", "cadence", "mode", "c-min", "c-max",
    "c-steps", "rows", "out", "format",
];

/// Parse `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::validation("config", format!("line {}: expected key=value", i + 1)));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::validation("config", format!("line {}: unknown key {key:?}", i + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::validation("config", format!("line {}: duplicate key {key:?}", i + 1)));
        }
    }
    Ok(map)
}

/// Flag values layered over the configuration file.
#[derive(Debug, Clone)]
pub struct Settings {
    flags: Options,
    file: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(flags: Options) -> Result<Self, CliError> {
        let mut file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::validation("config", format!("{}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        // a flag for one of amplitude/period replaces either from the file
        if flags.amplitude.is_some() || flags.period.is_some() {
            file.remove("amplitude");
            file.remove("period");
        }
        if file.contains_key("amplitude") && file.contains_key("period") {
            return Err(CliError::validation("config", "amplitude and period are mutually exclusive"));
        }
        Ok(Self { flags, file })
    }

    fn from_file<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.file.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::validation(key, format!("cannot parse {raw:?}: {e}"))),
            None => Ok(None),
        }
    }

    fn pick<T: FromStr + Clone>(&self, key: &str, flag: &Option<T>) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v.clone())),
            None => self.from_file(key),
        }
    }

    pub fn p(&self) -> Result<Option<u32>, CliError> {
        self.pick("p", &self.flags.p)
    }

    pub fn c(&self) -> Result<Option<f64>, CliError> {
        self.pick("c", &self.flags.c)
    }

    pub fn amplitude(&self) -> Result<Option<f64>, CliError> {
        self.pick("amplitude", &self.flags.amplitude)
    }

    pub fn period(&self) -> Result<Option<f64>, CliError> {
        self.pick("period", &self.flags.period)
    }

    pub fn modes(&self) -> Result<Option<usize>, CliError> {
        self.pick("modes", &self.flags.modes)
    }

    pub fn grid(&self) -> Result<Option<usize>, CliError> {
        self.pick("grid", &self.flags.grid)
    }

    pub fn dt(&self) -> Result<Option<f64>, CliError> {
        self.pick("dt", &self.flags.dt)
    }

    pub fn t_end(&self) -> Result<Option<f64>, CliError> {
        self.pick("t-end", &self.flags.t_end)
    }

    pub fn epsilon(&self) -> Result<Option<f64>, CliError> {
        self.pick("epsilon", &self.flags.epsilon)
    }

    pub fn cadence(&self) -> Result<Option<f64>, CliError> {
        self.pick("cadence", &self.flags.cadence)
    }

    pub fn mode(&self) -> Result<Option<u32>, CliError> {
        self.pick("mode", &self.flags.mode)
    }

    pub fn c_min(&self) -> Result<Option<f64>, CliError> {
        self.pick("c-min", &self.flags.c_min)
    }

    pub fn c_max(&self) -> Result<Option<f64>, CliError> {
        self.pick("c-max", &self.flags.c_max)
    }

    pub fn c_steps(&self) -> Result<Option<usize>, CliError> {
        self.pick("c-steps", &self.flags.c_steps)
    }

    pub fn rows(&self) -> Result<Option<String>, CliError> {
        self.pick("rows", &self.flags.rows)
    }

    pub fn out(&self) -> Result<Option<PathBuf>, CliError> {
        self.pick("out", &self.flags.out)
    }

    pub fn format(&self) -> Result<Option<Format>, CliError> {
        self.pick("format", &self.flags.format)
    }
}
