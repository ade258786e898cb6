// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line surface.
//!
//! Every option is optional at parse time because it may also come from a
//! JSON config file (`--config`). Values given on the command line win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "agehopf", version, about = "Hopf bifurcation analysis of an infection-age SIS model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium, reduced coefficients and the stability assumptions.
    Analyze(AnalyzeArgs),
    /// Critical delays tau_k with crossing data.
    Hopf(HopfArgs),
    /// Normal-form coefficients and the conjugation audit at tau_k.
    NormalForm(NormalFormArgs),
    /// Integrate the scaled model in time.
    Simulate(SimulateArgs),
    /// Regenerate the data behind the four Figure-1 panels.
    ReproduceFigure1(FigureArgs),
    /// Run the oracle suites.
    Validate(ValidateArgs),
}

/// Model constants shared by every command.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Recruitment rate (written A in the figure caption).
    #[arg(long, alias = "A", allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Natural death rate.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Recovery rate.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// JSON file whose keys mirror the long flag names (with `_` for `-`).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also report the equilibrium age profiles at this delay.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct HopfArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Largest crossing index to report [default: 5].
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Output format [default: json].
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Reduction,
    Published,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Scalar,
    BetaWeightedAge,
}

#[derive(Debug, Args)]
pub struct NormalFormArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Crossing index [default: 0].
    #[arg(long)]
    pub k: Option<usize>,
    /// Which evaluation supplies A1, C0, C1 [default: reduction].
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
    /// Reading of the age-looking exponential factor [default: scalar].
    #[arg(long, value_enum)]
    pub reading: Option<ReadingArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Dde,
    Pde,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Integration scheme [default: dde].
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Step in scaled time; 1/dt must be an integer [default: 0.001].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Horizon in scaled time [default: 200].
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Relative displacement of the seed from equilibrium [default: 0.05].
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Keep every n-th step in the CSV [default: 1].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Trajectory CSV path; diagnostics go next to it. Without it only the
    /// diagnostics JSON is printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// PDE only: also write the `t,a,i` age surface here.
    #[arg(long)]
    pub surface: Option<PathBuf>,
    /// PDE only: record the surface every n steps [default: 100].
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    /// PDE only: keep every n-th age node in the surface [default: 20].
    #[arg(long)]
    pub age_stride: Option<usize>,
    /// Write time in original units and divide densities by tau.
    #[arg(long)]
    pub original_units: bool,
    /// Emit a companion gnuplot script next to the CSV.
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Output directory [default: figure1].
    #[arg(long)]
    pub outdir: Option<PathBuf>,
    /// Delay of the simulated panels [default: 24].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Horizon of the delay-scheme run [default: 2000].
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Spectral,
    Schemes,
    Audit,
    Transversality,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Run only these suites (repeatable) [default: all].
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Test hook: shift p_minus by this amount before auditing, which must
    /// make the audit fail.
    #[arg(long, allow_negative_numbers = true)]
    pub inject_perturbation: Option<f64>,
    /// Re-verify a stored normal-form JSON instead of recomputing.
    #[arg(long)]
    pub audit_file: Option<PathBuf>,
}
