use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "werner",
    version,
    about = "Werner states under independent amplitude-damping reservoirs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evolve one state to time --t and print its density matrix.
    Evolve,
    /// All measures of one state at time --t.
    Measure,
    /// Measures on a uniform grid over [0, tmax].
    Scan,
    /// Sudden-death times and pairwise crossings.
    Crossings,
    /// Negativity ordering of the X, Y, Z families between crossings.
    Ordering,
    /// Run the invariant suite, stopping at the first failure.
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Measure => "measure",
            Command::Scan => "scan",
            Command::Crossings => "crossings",
            Command::Ordering => "ordering",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Werner family; scan and crossings accept a list such as X,Y,Z.
    #[arg(long, global = true, value_delimiter = ',')]
    pub state: Vec<String>,
    /// Mixing parameter p in [0, 1].
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// JSON density matrix {"dims": [4,4], "re": [[..]], "im": [[..]]}.
    #[arg(long, global = true, value_name = "PATH")]
    pub state_file: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0.1)]
    pub gamma1: f64,
    #[arg(long, global = true, default_value_t = 0.1)]
    pub gamma2: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub nbar1: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    pub nbar2: f64,
    /// Evaluation time for evolve and measure.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    #[arg(long, global = true, default_value_t = 20.0)]
    pub tmax: f64,
    /// Number of grid points for scan.
    #[arg(long, global = true, default_value_t = 400)]
    pub steps: usize,
    /// RK4 step (integrator route only).
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Use the master-equation integrator even for quiet reservoirs.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Run both routes and add an oracle deviation column.
    #[arg(long, global = true)]
    pub both: bool,
    /// Restrict crossings to one measure (b, c or n).
    #[arg(long, global = true)]
    pub measure: Option<String>,
    /// Grid spacing of the sign-change scan behind event detection.
    #[arg(long, global = true)]
    pub event_step: Option<f64>,
    /// Write here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Prefix the output with the resolved configuration.
    #[arg(long, global = true)]
    pub echo_config: bool,
}
