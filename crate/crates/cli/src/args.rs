use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rootexp::ProfileKind;

use crate::config::List;

/// Higher-order expansions of estimators defined as roots of score functions.
///
/// Every parameter can also be given in a TOML file passed with `--config`,
/// under the key shown in brackets. Flags take precedence over the file.
#[derive(Debug, Parser)]
#[command(name = "rootexp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficient tables α_k as polynomials in δ̂_k = -δ_k/δ_1.
    ExpandSymbolic(SymbolicArgs),
    /// Expand the root of an exponential-family or custom polynomial score.
    Expand(ExpandArgs),
    /// Exponential sample: MLE 1/T_n against its expansions.
    ExponentialDemo(ExponentialArgs),
    /// Binomial sample: MLE T_n/N against its expansions.
    BinomialDemo(BinomialArgs),
    /// Ornstein-Uhlenbeck path: mean-reversion MLE against its expansions.
    OuDemo(OuArgs),
    /// Kolmogorov-Smirnov distances for the exponential model; writes ks_table.csv.
    KsFigure(KsArgs),
}

#[derive(Debug, Args)]
pub struct SymbolicArgs {
    /// Rate profile, upflat or zigzag [profile] [default: upflat]
    #[arg(long)]
    pub profile: Option<ProfileKind>,
    /// Expansion order, 1 to 8 [p] [default: 5]
    #[arg(long)]
    pub p: Option<usize>,
    /// Print JSON instead of the text table
    #[arg(long)]
    pub json: bool,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// expfamily or custom [model] [default: expfamily]
    #[arg(long)]
    pub model: Option<String>,
    /// Rate profile, upflat or zigzag [profile] [default: upflat]
    #[arg(long)]
    pub profile: Option<ProfileKind>,
    /// Expansion order, 1 to 8 [p] [default: 3]
    #[arg(long)]
    pub p: Option<usize>,
    /// Anchor θ_0; for expfamily also the true parameter [theta] (required)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Sample size; the rate is 1/√n [n] (required)
    #[arg(long)]
    pub n: Option<u64>,
    /// expfamily: exponential or binomial [family] [default: exponential]
    #[arg(long)]
    pub family: Option<String>,
    /// expfamily binomial: number of trials [N] [default: 1]
    #[arg(long = "N")]
    pub trials: Option<u64>,
    /// expfamily: mean of the statistic T_n [t_bar]
    #[arg(long, allow_hyphen_values = true)]
    pub t_bar: Option<f64>,
    /// expfamily: standardized statistic G_n, used when t_bar is absent [g]
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// custom: derivatives F(θ_0), DF(θ_0), D²F(θ_0), ... [derivs]
    #[arg(long, allow_hyphen_values = true)]
    pub derivs: Option<List<f64>>,
    /// Lower end of the remainder interval U [u_lo]
    #[arg(long, allow_hyphen_values = true)]
    pub u_lo: Option<f64>,
    /// Upper end of the remainder interval U [u_hi]
    #[arg(long, allow_hyphen_values = true)]
    pub u_hi: Option<f64>,
    /// Lower bound c on φ|DF| over U; estimated on a grid when absent [c]
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Output directory [out] [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentialArgs {
    /// True rate θ [theta] [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Sample size [n] [default: 100]
    #[arg(long)]
    pub n: Option<u64>,
    /// Highest expansion order, 1 to 8 [p] [default: 3]
    #[arg(long)]
    pub p: Option<usize>,
    /// RNG seed [seed] (required)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [out] [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BinomialArgs {
    /// True success probability θ [theta] [default: 0.3]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Sample size [n] [default: 100]
    #[arg(long)]
    pub n: Option<u64>,
    /// Trials per observation [N] [default: 1]
    #[arg(long = "N")]
    pub trials: Option<u64>,
    /// Highest expansion order, 1 to 8 [p] [default: 3]
    #[arg(long)]
    pub p: Option<usize>,
    /// upflat anchors at θ, zigzag at 1/2 [profile] [default: upflat]
    #[arg(long)]
    pub profile: Option<ProfileKind>,
    /// RNG seed [seed] (required)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [out] [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OuArgs {
    /// True mean-reversion rate θ [theta] [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Number of increments [n] [default: 1000]
    #[arg(long)]
    pub n: Option<u64>,
    /// Highest expansion order, 1 to 8 [p] [default: 3]
    #[arg(long)]
    pub p: Option<usize>,
    /// Sampling interval Δ [dt] [default: 0.1]
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// Diffusion coefficient σ [sigma] [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// RNG seed [seed] (required)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [out] [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KsArgs {
    /// True rate θ [theta] [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Monte Carlo sample size per n [m] [default: 100000]
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated sample sizes [n] [default: 5,10,20,50,100]
    #[arg(long)]
    pub n: Option<List<u64>>,
    /// RNG seed [seed] (required)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [out] [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
}
