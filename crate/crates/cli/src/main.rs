mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ishikawa", version, about = "Certified asymptotic regularity rates for Ishikawa iterations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric, convexity and uniform convexity axioms of the configured space.
    VerifySpace {
        #[command(flatten)]
        common: Common,
        /// Random samples per check.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Print the rate report (P, gamma0, Phi, Delta) without simulating.
    Rate {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate one precision: soundness of Phi, the step inequality audit and a trajectory CSV.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Soundness of Phi over the whole precision grid, in parallel.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Experiment configuration (TOML).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Overrides the configured step budget.
    #[arg(long, value_name = "N")]
    pub max_steps: Option<u64>,
    /// Directory for CSV and JSON artifacts.
    #[arg(long, value_name = "DIR", default_value = "ishikawa-out")]
    pub out: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Overrides the precision grid (comma separated); `run` uses the first value.
    #[arg(long, value_name = "EPS", value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::VerifySpace { common, samples } => commands::verify_space(common, *samples),
        Command::Rate { common } => commands::rate(common),
        Command::Run { common } => commands::run(common),
        Command::Sweep { common } => commands::sweep(common),
    };
    match result {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            commands::Status::from_error(&e).exit_code()
        }
    }
}
