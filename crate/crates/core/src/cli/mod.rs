//! Command-line harness: `run <config>` benchmarks shift-selection algorithms on one
//! system and writes CSV artifacts; `verify` runs the error-formula invariant battery.

mod bench;
mod config;
mod verify;

pub use bench::{run_benchmark, AlgorithmReport, BenchReport};
pub use config::{AlgorithmSpec, GridSpec, RunConfig, SystemSpec};
pub use verify::{verify_suite, CaseResult, VerifyOptions};

use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A failure with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rkmor", version, about = "Rational Krylov model-order reduction benchmarks")]
pub struct Cli {
    /// Output directory (overrides the config's `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run seed (overrides the config's `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the algorithms listed in a TOML config.
    Run { config: PathBuf },
    /// Check the error formulas, interpolation zeros, quadrature exactness and divided differences.
    Verify {
        /// System sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [20usize, 40])]
        n: Vec<usize>,
        /// Seeds (defaults to 0..5, or just `--seed` when given).
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Inject a sign fault into the two-sided formula; the battery must then fail.
        #[arg(long)]
        mutate: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { config } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let out = cli.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("rkmor-out"));
            cfg.out = Some(out.clone());
            let report = run_benchmark(&cfg, &out)?;
            for r in &report.algorithms {
                println!(
                    "{}: order {} max_error {:.3e} solves {}",
                    r.name,
                    r.run.order(),
                    r.curve.max_abs_error,
                    r.run.solve_count
                );
            }
            println!("wrote {}", report.out_dir.display());
            Ok(EXIT_OK)
        }
        Command::Verify { n, seeds, mutate } => {
            let seeds = match (seeds.is_empty(), cli.seed) {
                (false, _) => seeds,
                (true, Some(s)) => vec![s],
                (true, None) => VerifyOptions::default().seeds,
            };
            let opts = VerifyOptions { sizes: n, seeds, mutate };
            let ok = verify_suite(&opts, &mut std::io::stdout().lock())
                .map_err(|e| CliError::config(format!("writing report: {e}")))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
