//! `assort`: solve, evaluate, learn, generate and benchmark assortment instances.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "assort", version, about = "Combinatorial assortment optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Brute,
    Dp,
    Concave,
    ShowAll,
    Greedy,
    MarginalGreedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Revenue,
    Welfare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Random,
    GreedyFailure,
    Knapsack,
    WellPriced,
    Separated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Uniform,
    Exponential,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an assortment with one of the solvers.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, value_enum, default_value = "revenue")]
        objective: ObjectiveArg,
        /// Overrides the instance's cardinality bound.
        #[arg(long)]
        ell: Option<usize>,
        /// Rounding parameter for the greedy algorithms.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Also require a regular distribution for show-all.
        #[arg(long)]
        strict_regularity: bool,
    },
    /// Expected revenue and welfare of one assortment.
    Evaluate {
        instance: PathBuf,
        /// Comma-separated item ids; empty for the empty assortment.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        /// Also print the frontier of purchased bundles.
        #[arg(long)]
        explain: bool,
    },
    /// Learn an assortment from simulated purchases on a hidden instance.
    Learn {
        #[arg(long)]
        hidden: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
        /// Separation of the hidden instance; defaults to epsilon.
        #[arg(long)]
        epsilon0: Option<f64>,
        #[arg(long, default_value_t = assortment::learning::DEFAULT_C0)]
        c0: f64,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report the true expected revenue of the learned assortment.
        #[arg(long)]
        reveal: bool,
    },
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Run seeded trials and print a CSV comparing solvers to brute force.
    Bench(BenchArgs),
}

#[derive(clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    pub dist: DistArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size parameter of the greedy-failure family.
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Knapsack values, comma-separated.
    #[arg(long)]
    pub values: Option<String>,
    /// Knapsack weights, comma-separated.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub capacity: Option<f64>,
    /// Instance to reprice for the well-priced family.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon0: f64,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub family: Family,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    pub dist: DistArg,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "dp,brute")]
    pub algos: Vec<Algo>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the trials; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ASSORT_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { instance, algo, objective, ell, epsilon, strict_regularity } => {
            commands::solve(&instance, algo, objective, ell, epsilon, strict_regularity)
        }
        Command::Evaluate { instance, set, explain } => commands::evaluate(&instance, &set, explain),
        Command::Learn { hidden, k, epsilon, epsilon0, c0, ell, seed, reveal } => {
            commands::learn(&hidden, k, epsilon, epsilon0, c0, ell, seed, reveal)
        }
        Command::Gen(args) => commands::gen(&args),
        Command::Bench(args) => commands::bench(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<assortment::Error>() {
                Some(inner) if inner.is_precondition() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
