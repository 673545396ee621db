use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polymatroid::oracle::EnumerationBudget;
use polymatroid_cli::commands::{execute, parse_budget, Command, Options, Shift};

#[derive(Parser)]
#[command(
    name = "polymatroid",
    version,
    about = "Polymatroid optimization, reoptimization and equilibria"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Route solve/pne through brute-force enumeration.
    #[arg(long, global = true)]
    oracle: bool,
    /// Include the full exchange trace or marginal-vector dump.
    #[arg(long, global = true)]
    trace: bool,
    /// Include wall-clock times (reports are otherwise byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,
    /// Enumeration limits: N points, or ground=N,demand=N,points=N.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<EnumerationBudget>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimize the separable cost over the base polytope.
    Solve { file: PathBuf },
    /// Solve, then move to shifted parameters and/or rank by unit steps.
    Reopt {
        file: PathBuf,
        /// Parameter shift LABEL:+N or LABEL:-N; repeatable.
        #[arg(long = "shift", allow_hyphen_values = true)]
        shifts: Vec<Shift>,
        /// Target rank.
        #[arg(long = "d")]
        demand: Option<u64>,
    },
    /// Compute a pure Nash equilibrium of a game file.
    Pne { file: PathBuf },
    /// Report submodularity, monotonicity and cost regularity.
    Check { file: PathBuf },
    /// Build the counterexample instance and game for a non-submodular rank.
    Counterexample {
        file: PathBuf,
        /// Directory for the emitted instance and game files.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Randomized oracle-equivalence sweep.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Solve { file } => Command::Solve { file },
        Cmd::Reopt {
            file,
            shifts,
            demand,
        } => Command::Reopt {
            file,
            shifts,
            demand,
        },
        Cmd::Pne { file } => Command::Pne { file },
        Cmd::Check { file } => Command::Check { file },
        Cmd::Counterexample { file, emit } => Command::Counterexample { file, emit },
        Cmd::Selftest { seed } => Command::Selftest { seed },
    };
    let opts = Options {
        oracle: cli.oracle,
        trace: cli.trace,
        timing: cli.timing,
        budget: cli.budget.unwrap_or_default(),
    };
    let report = execute(&command, &opts, args);
    if let Some(err) = report.error() {
        eprintln!("error: {err}");
    }
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status().exit_code() as u8)
}
