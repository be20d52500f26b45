//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const CONFIG_HELP: &str = "\
Every command accepts --config FILE: a flat TOML table whose keys are flag
names without the leading dashes, for example

    n = [1, 2, 4, 8, 16]
    theta = [1.5, 0.5]
    trials = 1000000
    seed = 42
    N0 = 1.0
    timing = true

Flags given on the command line override config values, which override the
built-in defaults. Unknown keys are usage errors.

Exit status: 0 success, 1 runtime error, 2 usage error, 3 a computed
estimate violated the bound it is checked against.";

#[derive(Debug, Parser)]
#[command(name = "rlat", version, about = "Distance concentration of complex Gaussian random lattices", after_help = CONFIG_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chernoff tail-bound curves (θ e^{1-θ})^n over a θ grid for several n.
    BoundCurves(BoundCurvesArgs),
    /// Monte Carlo tail probabilities of the normalized lattice distance
    /// ||G(x̂-x)+w||² / (||x̂-x||² + nN0) against the Chernoff bound.
    TailProb(TailProbArgs),
    /// Concentration of the normalized distance around 1: exceedance
    /// probability, mean and variance (target 1/n) as n grows.
    Concentration(ConcentrationArgs),
    /// Mean sphere-decoding complexity (C_SD, N_SC) with radius² = α n N0,
    /// alongside the exponent and fixed-radius lower bounds.
    SdComplexity(SdComplexityArgs),
    /// Pairwise error probability E_H[Q(||HΔx|| / sqrt(2 N0))] and its
    /// convergence to Q(||Δx|| / sqrt(2 N0)), plus its tail-event frequency.
    Pep(PepArgs),
    /// Minimal-distance inflation of a fixed alphabet versus the
    /// sphere-packing bound, measured against the search radius.
    Inflation(InflationArgs),
    /// Decode one seeded instance and report the argmin and per-depth visit counts.
    Decode(DecodeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaKind {
    /// x̂ - x = (1+i, 0, ..., 0)
    Fixed,
    /// A fresh pair of distinct codewords per trial.
    Random,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Include per-point wall time in JSON output (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
    /// Flat TOML file of flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Master seed (required: runs are never seeded from the clock).
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct BoundCurvesArgs {
    /// Comma-separated dimensions n.
    #[arg(long, value_delimiter = ',', default_value = "1,4,16,64,256")]
    pub n: Vec<usize>,
    /// Explicit θ values; replaces the evenly spaced grid.
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.1)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub theta_max: f64,
    /// Grid points from theta-min to theta-max inclusive.
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct TailProbArgs {
    /// Comma-separated dimensions n.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    pub n: Vec<usize>,
    /// Thresholds: upper tail for θ >= 1, lower tail for θ < 1.
    #[arg(long, value_delimiter = ',', default_value = "1.5,0.5")]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Noise variance per complex entry.
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    /// n/m; each n uses m = max(1, floor(n/kappa)).
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = DeltaKind::Fixed)]
    pub delta_x: DeltaKind,
    /// Alphabet size per real dimension (random pairs).
    #[arg(long = "L", default_value_t = 2)]
    pub l: u32,
    /// Alphabet offset (random pairs).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tau: i64,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct ConcentrationArgs {
    /// Comma-separated dimensions n.
    #[arg(long, value_delimiter = ',', default_value = "4,16,64,256")]
    pub n: Vec<usize>,
    /// Deviation threshold ε in P(|ratio - 1| > ε).
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct SdComplexityArgs {
    /// Comma-separated dimensions n.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    pub n: Vec<usize>,
    /// n/m, must exceed 1.
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    /// Radius factor: radius² = alpha n N0.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long = "L", default_value_t = 2)]
    pub l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tau: i64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Largest codebook size (L²)^m accepted.
    #[arg(long, default_value_t = rlat::lattice::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct PepArgs {
    /// Comma-separated dimensions n.
    #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
    pub n: Vec<usize>,
    /// Tail thresholds for the Q-function event.
    #[arg(long, value_delimiter = ',', default_value = "1.5")]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    /// Leading entries of x̂ - x as Gaussian integers, zero-padded to m.
    #[arg(long, value_delimiter = ',', default_value = "1+1i")]
    pub delta_x: Vec<String>,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct InflationArgs {
    /// Strictly increasing dimensions m.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128")]
    pub m: Vec<u32>,
    #[arg(long = "L", default_value_t = 2)]
    pub l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tau: i64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    /// Chordal-to-geodesic constant of the packing bound.
    #[arg(long, default_value_t = 1.0)]
    pub alpha_prime: f64,
    /// Rate in bits per complex coordinate [default: log2(L²)].
    #[arg(long)]
    pub rate: Option<f64>,
    /// Average symbol power [default: that of the alphabet].
    #[arg(long)]
    pub ex: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, after_help = CONFIG_HELP)]
pub struct DecodeArgs {
    #[arg(long)]
    pub n: usize,
    /// Codeword dimension [default: floor(n/2)].
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "L", default_value_t = 2)]
    pub l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tau: i64,
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    /// Radius factor: radius² = alpha n N0.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Explicit radius²; overrides alpha.
    #[arg(long)]
    pub rho_sq: Option<f64>,
    /// Master seed for the instance.
    #[arg(long)]
    pub seed: u64,
    /// Also run the exhaustive oracle and require exact agreement.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}
