//! Command-line front end of the `logkg` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, Subcommand};

use config::{Options, Settings};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "logkg", version, about = "Periodic standing waves of the logarithmic Klein-Gordon equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Floquet table (default: the nine reference rows at c0 = 0.5).
    Table(Options),
    /// Sampled profile x, phi, dphi.
    Wave(Options),
    /// Hill and block-operator spectra.
    Spectrum(Options),
    /// Stability report.
    Stability(Options),
    /// Evolve perturbed standing-wave data and record diagnostics.
    Simulate(Options),
    /// Stability reports over a range of c at fixed period.
    Sweep(Options),
}

/// Run one parsed command and write its output. Returns the deferred failure,
/// if any, after the output has been written.
pub fn run(command: Command) -> Result<(), CliError> {
    let (options, handler): (Options, fn(&Settings) -> Result<commands::Rendered, CliError>) = match command {
        Command::Table(o) => (o, commands::table),
        Command::Wave(o) => (o, commands::wave),
        Command::Spectrum(o) => (o, commands::spectrum),
        Command::Stability(o) => (o, commands::stability),
        Command::Simulate(o) => (o, commands::simulate),
        Command::Sweep(o) => (o, commands::sweep),
    };
    let settings = Settings::load(options)?;
    let out = settings.out()?;
    let rendered = handler(&settings)?;
    output::emit(out.as_deref(), &rendered.text)?;
    match rendered.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
