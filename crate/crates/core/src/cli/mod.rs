//! Command-line front end: scenario files in, CSV/JSON reports out.
//!
//! Exit codes: 0 success, 2 config error, 3 physics-constraint violation,
//! 4 numerical failure.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_check, cmd_evolve, cmd_pure_coeffs, cmd_steady, cmd_sweep, cmd_wigner, CommandOutput, SweepParam,
};
pub use config::{CoefficientSpec, ConfigError, ConfigErrorKind, InitialStateSpec, Integrator, ScenarioConfig};
pub use output::{Cell, Format, Table};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "oscillad", version, about = "Damped quantum harmonic oscillator in Gaussian-state form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario file
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moment trajectory with diagnostics
    Evolve(CommonArgs),
    /// Asymptotic state as JSON
    Steady(CommonArgs),
    /// Purity-preserving environment report as JSON
    PureCoeffs(CommonArgs),
    /// Constraint predicates, PASS/FAIL per line
    Check(CommonArgs),
    /// Wigner function on a phase-space grid
    Wigner {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Intervals per axis (even, at least 16)
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Grid halfwidth in standard deviations
        #[arg(long, default_value_t = 6.0)]
        extent: f64,
    },
    /// Steady-state summaries over a parameter range
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Evolve(c) | Command::Steady(c) | Command::PureCoeffs(c) | Command::Check(c) => c,
            Command::Wigner { common, .. } | Command::Sweep { common, .. } => common,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs one subcommand and returns its exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let common = cli.command.common();
    let cfg = ScenarioConfig::load(&common.config)?;
    let fmt = common.format;
    let output = match &cli.command {
        Command::Evolve(_) => cmd_evolve(&cfg, fmt)?,
        Command::Steady(_) => cmd_steady(&cfg)?,
        Command::PureCoeffs(_) => cmd_pure_coeffs(&cfg)?,
        Command::Check(_) => cmd_check(&cfg)?,
        Command::Wigner { t, n, extent, .. } => cmd_wigner(&cfg, *t, *n, *extent, fmt)?,
        Command::Sweep { param, from, to, steps, .. } => cmd_sweep(&cfg, *param, *from, *to, *steps, fmt)?,
    };
    emit(&output.text, common.out.as_deref())?;
    Ok(output.exit_code)
}
