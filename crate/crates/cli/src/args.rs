use std::path::PathBuf;

use bellcat_core::{Normalization, Polarization};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "bellcat", version, about = "Correlations and Bell-type inequalities for spin-s cat-states")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// JSON file with default parameters; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Read every angle (xi, eta, directions, sweeps) in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation p(a, b) in the full space or the SCS subspace.
    Correlate(CorrelateArgs),
    /// Evaluate p_s = p(a,b) p(a,c) - |p(b,c)|.
    Ubi(UbiArgs),
    /// Grid scan written as CSV.
    Scan(ScanArgs),
    /// Search for the largest p_s over directions and state parameters.
    MaxViolation(MaxViolationArgs),
    /// Local hidden-variable estimate of p_s.
    Lhv(LhvArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolArg {
    #[serde(alias = "antiparallel")]
    Anti,
    #[serde(alias = "parallel")]
    Para,
}

impl From<PolArg> for Polarization {
    fn from(p: PolArg) -> Self {
        match p {
            PolArg::Anti => Polarization::Antiparallel,
            PolArg::Para => Polarization::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Full,
    Scs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    Raw,
    Scaled,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Raw => Normalization::Raw,
            NormArg::Scaled => Normalization::Scaled,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Spin as `k/2` or an integer.
    #[arg(long)]
    pub s: Option<String>,
    /// Polarization of the two cat components [default: anti].
    #[arg(long, value_enum)]
    pub pol: Option<PolArg>,
    /// Amplitude angle xi [default: pi/4].
    #[arg(long)]
    pub xi: Option<f64>,
    /// Relative phase eta [default: pi/4].
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Direction a as `theta,phi`.
    #[arg(long)]
    pub a: Option<String>,
    /// Direction b as `theta,phi`.
    #[arg(long)]
    pub b: Option<String>,
    /// Outcome space [default: full].
    #[arg(long, value_enum)]
    pub space: Option<Space>,
    /// SCS correlations divided by N (scaled) or not [default: scaled for half-integer spin].
    #[arg(long, value_enum)]
    pub normalization: Option<NormArg>,
}

#[derive(Debug, Clone, Args)]
pub struct UbiArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long, value_enum)]
    pub normalization: Option<NormArg>,
    /// Use only the local (diagonal) part of the subspace correlations.
    #[arg(long)]
    pub local: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    /// Space for the p(a, b) columns and p_s [default: scs].
    #[arg(long, value_enum)]
    pub space: Option<Space>,
    #[arg(long, value_enum)]
    pub normalization: Option<NormArg>,
    /// `name=start:stop:count`, repeatable; the first sweep is the outermost loop.
    /// Names: xi, eta, theta_a, phi_a, theta_b, phi_b, theta_c, phi_c, or
    /// `s=start:stop` over every spin in the range.
    #[arg(long = "sweep")]
    pub sweeps: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MaxViolationArgs {
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, value_enum)]
    pub pol: Option<PolArg>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub refine_iterations: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub top_candidates: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub normalization: Option<NormArg>,
}

#[derive(Debug, Clone, Args)]
pub struct LhvArgs {
    /// Model id such as `sign/anti/w=1` or `phase-k3/para` [default: sign/anti/w=1].
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    /// Monte Carlo samples [default: 100000].
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exact quadrature over the hidden variable instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Quadrature nodes for `--exhaustive` [default: 100000].
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Print the built-in model ids and exit.
    #[arg(long)]
    pub list: bool,
}
