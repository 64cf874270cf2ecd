//! `vdl`: decoherence-kernel sweeps, oracle cross-checks, feasibility
//! reports and mode-grid demonstrations.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 numerical failure
//! (non-convergence or an oracle tolerance exceeded), 4 I/O error.

mod config;
mod error;
mod modes;
mod oracle;
mod output;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vdl_core::SeriesPolicy;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "vdl", version, about = "Decoherence from cavity vacuum fluctuations")]
struct Cli {
    /// Experiment file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (directory for `figure2`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Truncation target for the image series, in units of α².
    #[arg(long, global = true, value_name = "X")]
    tail_bound: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep one of τ, α, κ and tabulate Γ and D.
    KernelSweep(sweep::SweepArgs),
    /// Compare the closed-form terms with direct quadrature.
    OracleCheck(oracle::OracleArgs),
    /// Laboratory inputs to couplings, loss estimate and verdicts.
    Feasibility(report::FeasibilityArgs),
    /// One τ ∈ [0, 5] curve per α at κ = 1e8.
    Figure2(sweep::Figure2Args),
    /// Grid-refinement study of the discrete-mode simulator.
    ModesDemo(modes::ModesArgs),
}

/// Settings shared by every subcommand.
pub struct Globals {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub policy: SeriesPolicy,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    let mut policy = SeriesPolicy::default();
    if let Some(tb) = cli.tail_bound {
        policy.tail_bound = tb;
    }
    policy.validate()?;
    let globals = Globals {
        config: cli.config,
        out: cli.out,
        policy,
    };
    match cli.command {
        Command::KernelSweep(args) => sweep::kernel_sweep(&globals, &args),
        Command::OracleCheck(args) => oracle::oracle_check(&globals, &args),
        Command::Feasibility(args) => report::feasibility(&globals, &args),
        Command::Figure2(args) => sweep::figure2(&globals, &args),
        Command::ModesDemo(args) => modes::modes_demo(&globals, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vdl: {e}");
            e.exit_code()
        }
    }
}
