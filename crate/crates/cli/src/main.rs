//! `qpoker`: build, solve, quantize and verify the poker endgame models.

mod commands;
mod preset;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qpoker_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Parser)]
#[command(
    name = "qpoker",
    version,
    about = "Classical and quantized analysis of two poker endgames"
)]
struct Cli {
    /// Output format; csv applies to `build` traces, table to `build` and `verify`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a poker model's strategic form and reduce it by dominance.
    Build(BuildArgs),
    /// Solve a built-in game or a game JSON file.
    Solve(GameArgs),
    /// Evaluate a quantized profile under the EWL protocol.
    Quantize(QuantizeArgs),
    /// Run acceptance checks: tables, classical, quantum, report or all.
    Verify(VerifyArgs),
    /// Compare classical and quantized equilibrium payoffs.
    Report(SamplingArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// sp (Simplified Poker) or ns (Nash-Shapley).
    #[arg(long)]
    pub variant: String,
    /// Ante, an exact amount such as 15 or 5/2.
    #[arg(long)]
    pub ante: Option<String>,
    #[arg(long)]
    pub bet: Option<String>,
}

#[derive(Args)]
pub struct GameArgs {
    /// pd, chicken, sp, ns, or a path to a game JSON file.
    #[arg(long)]
    pub game: String,
}

#[derive(Args)]
pub struct SamplingArgs {
    /// Random seed; falls back to QPOKER_SEED.
    #[arg(long, env = "QPOKER_SEED")]
    pub seed: Option<u64>,
    /// Monte Carlo draws per estimate.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
}

#[derive(Args)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Start from the maximally entangled state (the default).
    #[arg(long, conflicts_with = "no_entangled")]
    pub entangled: bool,
    /// Start from |0…0⟩.
    #[arg(long)]
    pub no_entangled: bool,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub p2: Option<String>,
    #[arg(long)]
    pub p3: Option<String>,
    /// uniform-all (everyone Haar) or discrete-all (everyone a discrete equivalent).
    #[arg(long)]
    pub preset: Option<String>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(default_value = "all")]
    pub suite: String,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Simulated deals for the snap-off estimate.
    #[arg(long, default_value_t = 1_000_000)]
    pub deals: u64,
}

/// Rendered output and whether every requested certification passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Build(a) => commands::build(&a, cli.format),
        Command::Solve(a) => commands::solve(&a, cli.format),
        Command::Quantize(a) => commands::quantize(&a, cli.format),
        Command::Verify(a) => commands::verify(&a, cli.format),
        Command::Report(a) => commands::report(&a, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let written = match output {
                Some(path) => std::fs::write(path, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("certification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
