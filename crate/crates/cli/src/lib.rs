//! Command-line front end: estimator sweeps, detector evolution, retrocausality audits and GME
//! regime reports.

mod commands;
mod config;
mod format;

pub use commands::run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::FileConfig;

pub const SCHEMA: &str = "qcc-1";

#[derive(Debug, Parser)]
#[command(name = "qcc", version, about = "Causal and retrocausal signalling in quantum-controlled models")]
pub struct Cli {
    /// Spacetime dimension: 1p1 or 3p1.
    #[arg(long, global = true)]
    pub dim: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signalling estimator and its causal/retrocausal split for one geometry.
    Estimate(GeometryArgs),
    /// Estimator or gapless-phase table over a grid of durations.
    Sweep(SweepArgs),
    /// Final state of A (second order, or exact for gapless detectors).
    Evolve(EvolveArgs),
    /// Retro subregion search and witness.
    Audit(AuditArgs),
    /// Regime report for gravity-mediated-entanglement parameters (SI units).
    Gme(GmeArgs),
    /// Scaling of the H_diff diagnostic with the switching timescale.
    Hdiff(HdiffArgs),
}

#[derive(Debug, Default, Clone, Args)]
pub struct GeometryArgs {
    /// Spatial separation.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Duration of A.
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Extra duration of B (1+1 only).
    #[arg(long = "S")]
    pub s: Option<f64>,
    /// Switch-on time of B.
    #[arg(long = "t-b-on", allow_hyphen_values = true)]
    pub t_b_on: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Estimate,
    Nonpert,
}

#[derive(Debug, Default, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub mode: Option<SweepMode>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "S")]
    pub s: Option<f64>,
    #[arg(long = "T-min")]
    pub t_min: Option<f64>,
    #[arg(long = "T-max")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coupling (nonpert mode).
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct DetectorArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "omega-a")]
    pub omega_a: Option<f64>,
    #[arg(long = "omega-b")]
    pub omega_b: Option<f64>,
    #[arg(long = "alpha-a")]
    pub alpha_a: Option<f64>,
    #[arg(long = "beta-a-re", allow_hyphen_values = true)]
    pub beta_a_re: Option<f64>,
    #[arg(long = "beta-a-im", allow_hyphen_values = true)]
    pub beta_a_im: Option<f64>,
    #[arg(long = "alpha-b")]
    pub alpha_b: Option<f64>,
    #[arg(long = "beta-b-re", allow_hyphen_values = true)]
    pub beta_b_re: Option<f64>,
    #[arg(long = "beta-b-im", allow_hyphen_values = true)]
    pub beta_b_im: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Perturbative,
    Exact,
}

#[derive(Debug, Default, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub detectors: DetectorArgs,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct AuditArgs {
    /// qc or qft.
    #[arg(long)]
    pub model: Option<String>,
    /// fig2, fig4 or trailing.
    #[arg(long)]
    pub geometry: Option<String>,
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    #[command(flatten)]
    pub layout: GeometryArgs,
    #[command(flatten)]
    pub detectors: DetectorArgs,
}

#[derive(Debug, Default, Clone, Args)]
pub struct GmeArgs {
    /// Mass 1 in kg.
    #[arg(long)]
    pub m1: Option<f64>,
    /// Mass 2 in kg.
    #[arg(long)]
    pub m2: Option<f64>,
    /// Separation in metres.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Interaction time in seconds.
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Experimental time resolution in seconds.
    #[arg(long)]
    pub resolution: Option<f64>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct HdiffArgs {
    /// Switching timescale; repeat for several.
    #[arg(long = "T")]
    pub t: Vec<f64>,
    /// Width of the unit-timescale gaussian switching.
    #[arg(long)]
    pub width: Option<f64>,
    /// Half-width of the spatial integration box.
    #[arg(long = "half-width")]
    pub half_width: Option<f64>,
    /// Gaussian spatial width (pointlike when absent).
    #[arg(long = "spatial-width")]
    pub spatial_width: Option<f64>,
}

/// A usage problem detected after parsing (missing value, conflicting flags).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn load_config(cli: &Cli) -> anyhow::Result<FileConfig> {
    match &cli.config {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| UsageError(e.to_string()))?;
    run(cli)
}

/// Error kind reported on stderr and the matching exit code.
pub fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(e) = err.downcast_ref::<qcc_core::Error>() {
        (e.kind(), 1)
    } else if err.downcast_ref::<UsageError>().is_some() {
        ("usage", 2)
    } else {
        ("io", 1)
    }
}
