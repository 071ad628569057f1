use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pbound", version, about = "Poisson-binomial PMFs and the uniform bound on sigma * P(S = i)")]
pub struct Cli {
    /// Output format. CSV is available for `pmf` only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the PMF of a Poisson-binomial or Skellam distribution.
    Pmf(PmfArgs),
    /// Compute the maximizer u* and the constant M.
    Constant(ConstantArgs),
    /// Check sigma * P(S = i) <= M for one distribution.
    Check(CheckArgs),
    /// Run every verification family and summarize.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ProbabilityInput {
    /// Comma-separated success probabilities; an empty string is the empty sum.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["probs_file", "skellam"])]
    pub probs: Option<String>,

    /// File with one probability per line; blank lines and `#` lines are skipped.
    #[arg(long, conflicts_with = "skellam")]
    pub probs_file: Option<PathBuf>,

    /// Use the difference of two Poisson variables with means `x` and `y`.
    #[arg(long)]
    pub skellam: bool,

    #[arg(long, allow_hyphen_values = true, requires = "skellam")]
    pub x: Option<f64>,

    #[arg(long, allow_hyphen_values = true, requires = "skellam")]
    pub y: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[command(flatten)]
    pub input: ProbabilityInput,

    /// Single Skellam index.
    #[arg(long, allow_hyphen_values = true, requires = "skellam", conflicts_with = "range")]
    pub i: Option<i64>,

    /// Skellam index range `lo:hi`.
    #[arg(long, allow_hyphen_values = true, requires = "skellam")]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// Golden-section tolerance.
    #[arg(long, default_value_t = pbound::bound::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: ProbabilityInput,

    /// Skellam index range `lo:hi`; must contain the mode.
    #[arg(long, allow_hyphen_values = true, requires = "skellam")]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random parameter vectors to test.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Largest random vector length.
    #[arg(long, default_value_t = 50)]
    pub n_max: usize,

    /// Largest binomial size in the two-binomial search and the single-binomial scan.
    #[arg(long, default_value_t = 200)]
    pub a_max: u64,

    /// Largest `a` in the sharpness sequence (powers of two up to this value).
    #[arg(long, default_value_t = 16_384)]
    pub sharpness_max: u64,
}
