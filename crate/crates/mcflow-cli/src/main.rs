//! Command-line harness: shape generation, entropy and rigidity experiments,
//! mean curvature flow runs with monitors, the planar Bonnesen check, and
//! quick verification suites.
//!
//! Exit codes: 0 success, 1 numerical non-convergence or failed checks,
//! 2 I/O or configuration errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad input, unreadable files, malformed specs.
    Config(String),
    /// The computation ran but did not converge or a check failed.
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }
}

impl From<mcflow::Error> for CliError {
    fn from(e: mcflow::Error) -> Self {
        match e {
            mcflow::Error::Io(_) | mcflow::Error::Parse(_) | mcflow::Error::InvalidParameter(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "mcflow",
    version,
    about = "Gaussian-weighted surface geometry and mean curvature flow experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a mesh from a shape spec and write it as OFF/OBJ.
    Generate(commands::generate::GenerateArgs),
    /// Entropy of a surface: multistart maximizer plus optional grid oracle.
    Entropy(commands::entropy::EntropyArgs),
    /// Mean curvature flow with checkpoints, diagnostics, and monitors.
    Flow(commands::flow::FlowArgs),
    /// Entropy-defect vs roundness report for one mesh or a family sweep.
    Rigidity(commands::rigidity::RigidityArgs),
    /// Classical Bonnesen inequality for a planar curve (CSV input).
    Bonnesen(commands::bonnesen::BonnesenArgs),
    /// Run a named verification suite and print per-check lines.
    Verify(commands::verify::VerifyArgs),
}

pub fn read_mesh(path: &PathBuf) -> Result<mcflow::TriangleMesh<f64>, CliError> {
    mcflow::mesh::io::read_mesh_file(path).map_err(CliError::from)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate::run(args),
        Command::Entropy(args) => commands::entropy::run(args),
        Command::Flow(args) => commands::flow::run(args),
        Command::Rigidity(args) => commands::rigidity::run(args),
        Command::Bonnesen(args) => commands::bonnesen::run(args),
        Command::Verify(args) => commands::verify::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
