//! Scenario-driven front end: loads a TOML scenario, runs one analysis and
//! writes its tables as CSV.

pub mod commands;
pub mod config;
mod error;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{load_config, parse_config, Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::{Cell, Report, Table};

#[derive(Debug, Parser)]
#[command(name = "magnetomech", version, about = "Levitated superconducting sphere coupled to a flux qubit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file, or `pb_default` for the bundled lead scenario.
    #[arg(long, global = true, default_value = config::BUNDLED_DEFAULT)]
    pub config: PathBuf,
    /// Output directory for CSV tables.
    #[arg(long, global = true, default_value = "results")]
    pub out: PathBuf,
    /// Override `simulation.fock_dim`.
    #[arg(long, global = true)]
    pub fock_dim: Option<usize>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Derived trap, coupling and qubit parameters with validity flags.
    Design,
    /// Adiabatic cooling figures and the phonon-number trajectory.
    Cool,
    /// Steady occupation and cooling rate over the β grid.
    SweepBeta,
    /// Collapse and revival of qubit purity under the displacement protocol.
    Superpose,
    /// Decoherence budget of the center-of-mass motion.
    Budget,
    /// Master-equation run of the dressed-frame exchange model.
    Evolve,
}

impl Command {
    pub fn execute(self, scenario: &Scenario) -> Result<Report, CliError> {
        match self {
            Command::Design => commands::design(scenario),
            Command::Cool => commands::cool(scenario),
            Command::SweepBeta => commands::sweep_beta(scenario),
            Command::Superpose => commands::superpose(scenario),
            Command::Budget => commands::budget(scenario),
            Command::Evolve => commands::evolve_cmd(scenario),
        }
    }
}

/// Load, validate, execute and write. Tables are written even when hard
/// validity flags fail; the failure is returned afterwards.
pub fn run(cli: &Cli) -> Result<(Report, Vec<PathBuf>), CliError> {
    let mut cfg = load_config(&cli.config)?;
    if let Some(n) = cli.fock_dim {
        cfg.simulation.fock_dim = n;
    }
    let scenario = cfg.validate()?;
    let report = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(vec![format!("--threads: {e}")]))?
            .install(|| cli.command.execute(&scenario))?,
        None => cli.command.execute(&scenario)?,
    };
    let files = write_report(&report, &cli.out)?;
    if !report.failed_flags.is_empty() {
        return Err(CliError::PhysicsFlags(report.failed_flags.clone()));
    }
    Ok((report, files))
}

pub fn write_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    report.tables.iter().map(|t| t.write(dir)).collect()
}
