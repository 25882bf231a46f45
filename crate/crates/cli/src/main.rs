use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use relequil::io::to_canonical_string;
use relequil::Tolerance;
use relequil_cli::{run, BackendChoice, RunConfig, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Auto,
    Exact,
    Float,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Inertia, stability classification and parity prediction for a symmetric matrix.
    Classify { input: PathBuf },
    /// Crossings and spectral flow along a Krein or linear path.
    Flow { input: PathBuf },
    /// Central configuration from an initial guess.
    NbodyFindCc { input: PathBuf },
    /// Central configuration, amended Hessian and parity verdicts.
    NbodyStability { input: PathBuf },
    /// Reproduce the worked examples and print a pass/fail table.
    #[command(name = "paper-examples")]
    WorkedExamples,
}

#[derive(Debug, Parser)]
#[command(
    name = "relequil",
    version,
    about = "Stability of linearized Hamiltonian systems from Morse index and nullity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "auto")]
    backend: BackendArg,
    /// Relative tolerance for float decisions.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Symplectic form Ω as a matrix file (default J).
    #[arg(long, global = true)]
    omega: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "s-max", global = true)]
    s_max: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (subcommand, input) = match cli.command {
        Command::Classify { input } => (Subcommand::Classify, Some(input)),
        Command::Flow { input } => (Subcommand::Flow, Some(input)),
        Command::NbodyFindCc { input } => (Subcommand::NbodyFindCc, Some(input)),
        Command::NbodyStability { input } => (Subcommand::NbodyStability, Some(input)),
        Command::WorkedExamples => (Subcommand::WorkedExamples, None),
    };
    let seed = match std::env::var("RELEQUIL_SEED") {
        Ok(s) => match s.trim().parse() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("RELEQUIL_SEED must be an unsigned integer, got {s:?}");
                return ExitCode::from(1);
            }
        },
        Err(_) => 0,
    };
    let cfg = RunConfig {
        subcommand,
        input,
        backend: match cli.backend {
            BackendArg::Auto => BackendChoice::Auto,
            BackendArg::Exact => BackendChoice::Exact,
            BackendArg::Float => BackendChoice::Float,
        },
        tol: cli
            .tol
            .map_or_else(Tolerance::default, Tolerance::with_relative),
        omega: cli.omega,
        out: cli.out,
        s_max: cli.s_max,
        seed,
    };
    let outcome = run(&cfg);
    if let Some(table) = &outcome.table {
        print!("{table}");
    }
    if let Some(report) = &outcome.report {
        let text = to_canonical_string(report);
        match (&cfg.out, &outcome.table) {
            (Some(path), _) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            (None, None) => print!("{text}"),
            (None, Some(_)) => {}
        }
    }
    if let Some(d) = &outcome.diagnostic {
        eprintln!("{d}");
    }
    ExitCode::from(outcome.code as u8)
}
