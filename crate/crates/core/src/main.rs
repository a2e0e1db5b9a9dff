use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rlp::cli::{cmd_l1, cmd_lp, cmd_maxflow, cmd_mdp, cmd_mincost, RunConfig};
use rlp::ipm::Mode;

#[derive(Parser)]
#[command(name = "rlp", version, about = "Robust interior point solver for two-sided LPs, flows, l1 regression and MDPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "practical", global = true)]
    mode: ModeArg,
    /// Step-size constant C (at least 2).
    #[arg(long = "C", default_value_t = 4.0, global = true)]
    c: f64,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Target accuracy (LP, l1, MDP policy).
    #[arg(long, default_value_t = 1e-6, global = true)]
    delta: f64,
    /// Write one JSON line per accepted step.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Perturbation rounds for exact flows.
    #[arg(long, default_value_t = 64, global = true)]
    retries: usize,
    /// Also run the brute-force oracle and compare.
    #[arg(long, global = true)]
    oracle_check: bool,
    /// Parallel perturbation rounds.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Practical,
    Theory,
}

#[derive(Subcommand)]
enum Command {
    /// Min-cost flow from a DIMACS `p min` file.
    Mincost { input: PathBuf },
    /// Max flow from a DIMACS `p max` file.
    Maxflow { input: PathBuf },
    /// LP from a Matrix Market file with a JSON sidecar {b, c, l, u}.
    Lp { input: PathBuf },
    /// l1 regression from a Matrix Market file with a JSON sidecar {c}.
    L1 { input: PathBuf },
    /// Discounted MDP from JSON {gamma, rewards, transitions}.
    Mdp { input: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    let cfg = RunConfig {
        mode: match cli.mode {
            ModeArg::Practical => Mode::Practical,
            ModeArg::Theory => Mode::Theory,
        },
        c: cli.c,
        seed: cli.seed,
        delta: cli.delta,
        trace: cli.trace,
        retries: cli.retries,
        oracle_check: cli.oracle_check,
        jobs: cli.jobs,
    };
    let out = match &cli.command {
        Command::Mincost { input } => cmd_mincost(input, &cfg),
        Command::Maxflow { input } => cmd_maxflow(input, &cfg),
        Command::Lp { input } => cmd_lp(input, &cfg),
        Command::L1 { input } => cmd_l1(input, &cfg),
        Command::Mdp { input } => cmd_mdp(input, &cfg),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
