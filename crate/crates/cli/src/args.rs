use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resample::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "resample", version, about = "Jackknife, bootstrap, permutation and enrichment statistics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "RESAMPLE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Upper bound on worker threads.
    #[arg(long, global = true, env = "RESAMPLE_THREADS")]
    pub threads: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delete-1 or delete-d jackknife of a statistic.
    Jack(JackArgs),
    /// Bootstrap standard error, exact bootstrap moments, or the
    /// jackknife-hyperplane variance check.
    Boot(BootArgs),
    /// Permutation test of the correlation of two columns.
    Perm(PermArgs),
    /// Fisher exact and EASE over-representation scores.
    Enrich(EnrichArgs),
    /// Simulation experiments.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// List every bootstrap resampling vector with its probability.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
pub struct JackArgs {
    /// CSV file: one column, or two for paired statistics.
    #[arg(long)]
    pub input: PathBuf,

    /// Statistic name (mean, plugin_variance, unbiased_variance,
    /// sample_max, median, pearson_r).
    #[arg(long)]
    pub stat: String,

    /// Observations deleted per replicate: a number or `auto`
    /// (floor(sqrt(n)) + 1).
    #[arg(long, default_value = "1")]
    pub d: String,

    /// Add a pseudovalue confidence interval at this level.
    #[arg(long)]
    pub level: Option<f64>,

    /// Reference distribution for the pseudovalue interval.
    #[arg(long, value_enum, default_value_t = ReferenceArg::T)]
    pub reference: ReferenceArg,

    /// Null value for the pseudovalue test statistic.
    #[arg(long = "null")]
    pub null_value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceArg {
    T,
    Normal,
}

#[derive(Debug, Args)]
pub struct BootArgs {
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long)]
    pub stat: String,

    /// Number of Monte Carlo resamples.
    #[arg(long = "B", alias = "resamples", default_value_t = 1000)]
    pub b: usize,

    /// Stream id within the seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,

    /// Enumerate every resample instead of sampling.
    #[arg(long, conflicts_with = "verify_theorem")]
    pub exact: bool,

    /// Compare the exact variance of the jackknife hyperplane with the
    /// jackknife variance.
    #[arg(long)]
    pub verify_theorem: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PermMode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlternativeArg {
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Args)]
pub struct PermArgs {
    /// Two-column CSV of pairs.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, default_value = "pearson_r")]
    pub stat: String,

    #[arg(long, value_enum, default_value_t = PermMode::Exact)]
    pub mode: PermMode,

    /// Number of random permutations in Monte Carlo mode.
    #[arg(long = "B", alias = "permutations", default_value_t = 10_000)]
    pub b: usize,

    #[arg(long, default_value_t = 0)]
    pub stream: u64,

    #[arg(long, value_enum, default_value_t = AlternativeArg::TwoSided)]
    pub alternative: AlternativeArg,
}

#[derive(Debug, Args)]
pub struct EnrichArgs {
    /// Annotated population size N.
    #[arg(long)]
    pub population: u64,

    /// Category gene list, one identifier per line.
    #[arg(long, conflicts_with_all = ["category_dir", "category_size"])]
    pub category_file: Option<PathBuf>,

    /// Directory of category files, scored and ranked together.
    #[arg(long, conflicts_with = "category_size")]
    pub category_dir: Option<PathBuf>,

    /// Category size K, when giving the table directly.
    #[arg(long, requires_all = ["list_size", "overlap"])]
    pub category_size: Option<u64>,

    /// Discovery gene list, one identifier per line.
    #[arg(long, conflicts_with = "list_size")]
    pub list_file: Option<PathBuf>,

    /// Discovery list size m, when giving the table directly.
    #[arg(long)]
    pub list_size: Option<u64>,

    /// Overlap k, when giving the table directly.
    #[arg(long)]
    pub overlap: Option<u64>,

    /// Also shrink the list by one when removing an overlapping gene.
    #[arg(long)]
    pub strict_m: bool,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Jackknife-corrected versus raw maximum of Uniform(0, theta) samples.
    UniformMax(UniformMaxArgs),
}

#[derive(Debug, Args)]
pub struct UniformMaxArgs {
    #[arg(long, default_value_t = 5.0)]
    pub theta: f64,

    #[arg(long, default_value_t = 100)]
    pub n: usize,

    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,

    /// Also write every replication to this CSV file.
    #[arg(long)]
    pub replications_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Sample size.
    #[arg(long)]
    pub n: usize,
}
