//! `hspec`: tables, transforms and invariant checks for harmonic manifolds
//! of hypergeometric type.

mod checks;
mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Direction, TableKind};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "hspec", version, about = "Spherical Fourier analysis on harmonic manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the entropy bounds for (n, Q).
    Validate(Overrides),
    /// Tabulate density, mean curvature, spherical functions or the c-function.
    Table {
        #[arg(long, value_enum)]
        what: TableKind,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Transform the configured radial function.
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the invariant suite.
    Check(Overrides),
}

/// Flags mirror config keys and win over the file.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r_min: Option<String>,
    #[arg(long)]
    r_max: Option<String>,
    #[arg(long)]
    r_steps: Option<String>,
    #[arg(long)]
    lambda_max: Option<String>,
    #[arg(long)]
    lambda_steps: Option<String>,
    /// bump, gaussian, zero or samples
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    support: Option<String>,
    /// `r, value` rows on a uniform grid from zero
    #[arg(long)]
    samples: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Tolerance override as `name=value`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
}

impl Overrides {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("n", self.n),
            ("q", self.q),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
            ("r_steps", self.r_steps),
            ("lambda_max", self.lambda_max),
            ("lambda_steps", self.lambda_steps),
            ("function", self.function),
            ("support", self.support),
            ("samples", self.samples),
            ("format", self.format),
            ("out", self.out),
        ];
        let mut pairs: Vec<(String, String)> =
            flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect();
        for entry in self.tolerances {
            let (name, value) = entry
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--tol expects NAME=VALUE, got `{entry}`")))?;
            pairs.push((format!("tol.{}", name.trim()), value.trim().to_string()));
        }
        config.apply(pairs)?;
        Ok(config)
    }
}

/// Cap the worker pool from `HSPEC_THREADS`.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HSPEC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("HSPEC_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Validate(overrides) => commands::validate(&overrides.resolve()?).map(drop),
        Command::Table { what, overrides } => commands::table(&overrides.resolve()?, what).map(drop),
        Command::Transform { direction, overrides } => commands::transform(&overrides.resolve()?, direction).map(drop),
        Command::Check(overrides) => checks::check(&overrides.resolve()?).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hspec: {e}");
            e.exit_code()
        }
    }
}
