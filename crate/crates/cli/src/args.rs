use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::scenario_file::parse_fix;

/// Upper bound on `sample -n`.
pub const MAX_SAMPLES: usize = 50_000_000;
/// Upper bound on `chsh --restarts`.
pub const MAX_RESTARTS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "qframes",
    version,
    about = "Exact Born-rule tables, single-world consistency checks and CHSH optimization"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Support threshold: outcomes with probability above it are possible.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = parse_tol)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Unitary,
    Collapse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateName {
    Singlet,
    #[value(name = "product00")]
    Product00,
    Fr,
    PhiPlus,
}

impl StateName {
    pub fn as_str(self) -> &'static str {
        match self {
            StateName::Singlet => "singlet",
            StateName::Product00 => "product00",
            StateName::Fr => "fr",
            StateName::PhiPlus => "phi-plus",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct Source {
    /// Scenario file (JSON).
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub path: Option<PathBuf>,
    /// Built-in scenario instead of a file.
    #[arg(long, value_parser = ["fr", "frauchiger-renner"])]
    pub builtin: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Super-observer statistics in the two ultimate-observer modes.
    Fr {
        #[arg(long, value_enum, default_value_t = Mode::Unitary)]
        mode: Mode,
    },
    /// Search for single-world value assignments or certify there are none.
    Certify {
        #[command(flatten)]
        source: Source,
        /// Fix an observable, e.g. `--fix X=ok`; overrides the file's constraint on it.
        #[arg(long = "fix", value_name = "OBS=LABEL", value_parser = parse_fix)]
        fix: Vec<(String, String)>,
    },
    /// Maximize the CHSH combination over measurement angles.
    Chsh {
        #[arg(long, value_enum, default_value_t = StateName::Singlet)]
        state: StateName,
        #[arg(long, default_value_t = 20, value_parser = parse_restarts)]
        restarts: usize,
    },
    /// Draw seeded samples from one context.
    Sample {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        context: String,
        #[arg(short = 'n', long = "n", default_value_t = 1, value_parser = parse_samples)]
        n: usize,
    },
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err("tolerance must lie strictly between 0 and 1".into())
    }
}

fn bounded(s: &str, max: usize) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=max).contains(&n) {
        Ok(n)
    } else {
        Err(format!("expected 1..={max}"))
    }
}

fn parse_restarts(s: &str) -> Result<usize, String> {
    bounded(s, MAX_RESTARTS)
}

fn parse_samples(s: &str) -> Result<usize, String> {
    bounded(s, MAX_SAMPLES)
}
