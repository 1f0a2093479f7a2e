//! Command-line front end: `qfock <command> --config <path>`.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CommandError;
use config::{ConfigError, RunConfig};
use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ENVELOPE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run every verification suite.
    Verify,
    /// Vacuum moment of a word, by operators and by the partition formula.
    Moments,
    /// Cumulant tensors of ω, or of ξ when a jump measure is given.
    Cumulants,
    /// Wick rule expansion and the Wick versus normal ordering comparison.
    Wick,
    /// Lévy cumulants, pyramidal independence and cyclicity.
    Levy,
    /// Orthogonal polynomials and chaos decomposition checks.
    Chaos,
    /// Anyon exclusion at a root of unity.
    Exclusion,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Moments => "moments",
            Command::Cumulants => "cumulants",
            Command::Wick => "wick",
            Command::Levy => "levy",
            Command::Chaos => "chaos",
            Command::Exclusion => "exclusion",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qfock",
    version,
    about = "Residual checks for Q-deformed Fock space identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub out: OutputFormat,
}

/// Result of a run: the rendered report (if any), a message for stderr and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn failure(code: i32, msg: String) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: msg,
        code,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let Some(path) = &cli.config else {
        return failure(EXIT_CONFIG, "missing --config <path>".into());
    };
    let setup = match RunConfig::from_path(path).and_then(RunConfig::setup) {
        Ok(s) => s,
        Err(ConfigError::Envelope(msg)) => {
            return failure(
                EXIT_ENVELOPE,
                format!("outside the supported envelope: {msg}"),
            )
        }
        Err(e) => return failure(EXIT_CONFIG, e.to_string()),
    };
    let seed = cli.seed.or(setup.config.seed).unwrap_or(0);
    let result = match cli.command {
        Command::Verify => commands::cmd_verify(&setup, seed),
        Command::Moments => commands::cmd_moments(&setup, seed),
        Command::Cumulants => commands::cmd_cumulants(&setup, seed),
        Command::Wick => commands::cmd_wick(&setup, seed),
        Command::Levy => commands::cmd_levy(&setup, seed),
        Command::Chaos => commands::cmd_chaos(&setup, seed),
        Command::Exclusion => commands::cmd_exclusion(&setup, seed),
    };
    let (checks, data) = match result {
        Ok(x) => x,
        Err(CommandError::Config(msg)) => return failure(EXIT_CONFIG, msg),
        Err(CommandError::Envelope(msg)) => return failure(EXIT_ENVELOPE, msg),
    };
    let report = Report::new(cli.command.name(), seed, checks, data);
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    Outcome {
        stdout: match cli.out {
            OutputFormat::Json => report.to_json(),
            OutputFormat::Csv => report.to_csv(),
        },
        stderr: if failed.is_empty() {
            String::new()
        } else {
            format!("failed: {}", failed.join(", "))
        },
        code: if report.pass {
            EXIT_PASS
        } else {
            EXIT_RESIDUAL
        },
    }
}
