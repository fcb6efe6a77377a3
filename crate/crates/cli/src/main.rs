//! Command-line front end: generate benchmark instances, construct stable
//! networks, verify stability, enumerate stable partitions, measure welfare
//! prices, run the hardness-reduction chain, replay dynamics and run the
//! scripted experiment battery.
//!
//! Commands compose through JSON on stdin/stdout. A document is either a
//! bare instance or a bundle `{"instance": .., "network": .., "schedule": ..}`,
//! so pipelines like `generate bn --n 9 | solve --alg peel | verify --k 9`
//! carry everything they need.
//!
//! Exit codes: 0 success, 1 instability found, 2 usage error, 3 oracle bound
//! exceeded, 4 no stable network exists.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gossipnet_core::{Error, ExecMode, SolverConfig};

#[derive(Parser)]
#[command(
    name = "gossipnet",
    version,
    about = "Solvers and exact analysis for information-sharing network formation games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ceiling for the exhaustive oracles (set partitions, exact solvers).
    #[arg(long, global = true)]
    oracle_bound: Option<usize>,

    /// Run every search sequentially (parallel by default).
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance; some families also define a network
    /// and a move schedule.
    Generate(commands::GenerateArgs),
    /// Construct a stable network for the instance on stdin.
    Solve(commands::SolveArgs),
    /// Check k-stability of a network; prints STABLE or UNSTABLE plus a
    /// defection witness.
    Verify(commands::VerifyArgs),
    /// List every k-stable clique partition in canonical order.
    Enumerate(commands::EnumerateArgs),
    /// Welfare report: optimum versus best/worst stable, with exact prices.
    Welfare(commands::WelfareArgs),
    /// Run the hardness-reduction chain on a graph, emitting every stage.
    Reduce(commands::ReduceArgs),
    /// Replay a move schedule (or auto-run best responses), one JSON line
    /// per state.
    Trace(commands::TraceArgs),
    /// Scripted experiment batteries.
    Experiment(commands::ExperimentArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = SolverConfig::default();
    if let Some(bound) = cli.oracle_bound {
        cfg = cfg.with_oracle_bound(bound);
    }
    if cli.sequential {
        cfg = cfg.with_exec(ExecMode::Sequential);
    }

    let outcome = match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Solve(args) => commands::solve(args, &cfg),
        Command::Verify(args) => commands::verify(args, &cfg),
        Command::Enumerate(args) => commands::enumerate(args, &cfg),
        Command::Welfare(args) => commands::welfare(args, &cfg),
        Command::Reduce(args) => commands::reduce(args, &cfg),
        Command::Trace(args) => commands::trace(args, &cfg),
        Command::Experiment(args) => commands::experiment(args, &cfg),
    };

    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BoundExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
