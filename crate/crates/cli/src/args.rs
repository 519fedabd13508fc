use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "otto",
    version,
    about = "Quantum Otto cycles on coupled-spin and custom media"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for sweeps and verification (0 = one per core).
    #[arg(long, global = true, env = "OTTO_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heat, work, regime and efficiency of a single cycle.
    #[command(allow_negative_numbers = true)]
    Cycle(CycleArgs),
    /// Evaluate a parameter grid described by a JSON config.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Locate the forbidden hot-bath temperature interval (T_a1, T_a2).
    #[command(allow_negative_numbers = true)]
    Gap(GapArgs),
    /// Asymptotic zone borders, optionally sampled over a T_b range.
    #[command(allow_negative_numbers = true)]
    Asymptotes(AsymptoteArgs),
    /// Cold-bath thresholds for enhanced efficiency near J = h_b/4.
    #[command(allow_negative_numbers = true)]
    Thresholds(SpinArgs),
    /// Run the built-in invariant checks and print a pass/fail table.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SpinArgs {
    /// Spin coupling J.
    #[arg(long = "J")]
    pub j: f64,
    /// Field during contact with bath a (lambda_a).
    #[arg(long)]
    pub ha: f64,
    /// Field during contact with bath b (lambda_b).
    #[arg(long)]
    pub hb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Spin,
    Qutrit,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    /// Spin coupling J (model media only).
    #[arg(long = "J", required_unless_present = "levels")]
    pub j: Option<f64>,
    /// Field during contact with bath a (lambda_a).
    #[arg(long)]
    pub ha: f64,
    /// Field during contact with bath b (lambda_b).
    #[arg(long)]
    pub hb: f64,
    /// Temperature of bath a.
    #[arg(long = "Ta")]
    pub t_a: f64,
    /// Temperature of bath b.
    #[arg(long = "Tb")]
    pub t_b: f64,
    #[arg(long, value_enum, default_value_t = Model::Spin, conflicts_with = "levels")]
    pub model: Model,
    /// JSON medium description: {"levels": [...]} or {"model": ..., "J": ...}.
    #[arg(long, conflicts_with = "j")]
    pub levels: Option<PathBuf>,
    /// Magnitude below which Q and W count as zero.
    #[arg(long)]
    pub zero_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Ndjson,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record format, overriding the config.
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[command(flatten)]
    pub spin: SpinArgs,
    /// Absolute temperature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[command(flatten)]
    pub spin: SpinArgs,
    /// Sample the border curves on a log grid of T_b starting here.
    #[arg(long, requires = "tb_max")]
    pub tb_min: Option<f64>,
    #[arg(long, requires = "tb_min")]
    pub tb_max: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 20_240_611)]
    pub seed: u64,
    /// Random points per randomized check.
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
}
