//! `bnsl`: learn, score, simulate and benchmark linear-Gaussian Bayesian
//! networks from the command line.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error,
//! 4 internal invariant violation.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Method, Score};

#[derive(Parser, Debug)]
#[command(name = "bnsl", version, about = "Score-based Bayesian network structure learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn a network from a dataset.
    Infer(InferArgs),
    /// Print the score of a network on a dataset.
    Score(ScoreArgs),
    /// Generate a synthetic dataset with its generating network and gold standard.
    Simulate(SimulateArgs),
    /// AUROC of an ensemble of networks against a gold standard.
    Evaluate(EvaluateArgs),
    /// Run every method and score on each dataset/gold pair.
    Benchmark(BenchmarkArgs),
    /// Exhaustively find the best network of a small dataset.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML run configuration; flags take precedence over its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Parent cap per node (also limited to N-2).
    #[arg(long, value_name = "K")]
    pub max_parents: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InferArgs {
    /// Dataset CSV; may instead come from the config file.
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum)]
    pub score: Option<Score>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    pub data: PathBuf,
    /// Edge list over the dataset's labels.
    pub network: PathBuf,
    #[arg(long, value_enum)]
    pub score: Option<Score>,
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Edge lists forming the ensemble.
    #[arg(required = true)]
    pub networks: Vec<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub gold: PathBuf,
    /// Context name written to the results CSV (default: gold file stem).
    #[arg(long)]
    pub context: Option<String>,
    /// Method name written to the results CSV.
    #[arg(long, default_value = "ensemble")]
    pub label: String,
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    /// Dataset CSVs, one per context.
    #[arg(long, required = true, num_args = 1..)]
    pub data: Vec<PathBuf>,
    /// Gold standards, matched to `--data` by position.
    #[arg(long, required = true, num_args = 1..)]
    pub gold: Vec<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub score: Option<Score>,
    #[command(flatten)]
    pub common: Common,
}

/// A failed command: exit code plus the message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<bnsl::Error> for Failure {
    fn from(e: bnsl::Error) -> Self {
        let code = if e.is_internal() {
            4
        } else if e.is_data_error() {
            3
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Infer(args) => commands::infer(args),
        Command::Score(args) => commands::score(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Benchmark(args) => commands::benchmark(args),
        Command::Enumerate(args) => commands::enumerate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
