//! Scenario-driven front end: each subcommand reads one scenario file,
//! runs the corresponding computation, and writes CSV (plus optional SVG)
//! into the output directory.
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on config errors.

mod commands;
mod config;
mod svg;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{run, CliError, CommandKind};
use config::{Overrides, RawConfig, Scenario};

#[derive(Parser)]
#[command(
    name = "sta-thermo-lab",
    about = "Transitionless-driving work/entropy laboratory",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (flat key = value lines)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV/SVG artifacts (default: current directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the integrator step count
    #[arg(long)]
    steps: Option<usize>,
    /// Override the eigenframe grid size (odd)
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the counterdiabatic drive strength over s
    Shortcut(RunArgs),
    /// Fidelity to the transported target versus protocol duration
    Evolve(RunArgs),
    /// Sample initial-state families and record work/entropy/coherence
    Scatter(RunArgs),
    /// Same sampling, plotted against the initial coherence
    Coherence(RunArgs),
    /// Trace the work-entropy boundary curves
    Frontier(RunArgs),
    /// Sweep an anisotropy parameter with crossing detection
    Sweep(RunArgs),
    /// Cross-validate the finite-difference shortcut against the closed form
    Verify(RunArgs),
}

impl Command {
    fn split(&self) -> (CommandKind, &RunArgs) {
        match self {
            Command::Shortcut(a) => (CommandKind::Shortcut, a),
            Command::Evolve(a) => (CommandKind::Evolve, a),
            Command::Scatter(a) => (CommandKind::Scatter, a),
            Command::Coherence(a) => (CommandKind::Coherence, a),
            Command::Frontier(a) => (CommandKind::Frontier, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        }
    }
}

fn execute(kind: CommandKind, args: &RunArgs) -> Result<(), CliError> {
    let raw = RawConfig::parse_file(&args.config).map_err(|e| CliError::Config(e.message))?;
    let overrides = Overrides {
        seed: args.seed,
        steps: args.steps,
        grid: args.grid,
    };
    let scenario =
        Scenario::from_raw(&raw, &overrides).map_err(|e| CliError::Config(e.message))?;
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let written = run(kind, &scenario, &out_dir)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Numerical(_) => ExitCode::from(1),
            }
        }
    }
}
