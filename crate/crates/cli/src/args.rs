use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spinelab::complexes::{StabilizationKind, DEFAULT_BUDGET};
use spinelab::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "spinelab", version, about = "Thorned graphs, spine quotients and homological stability checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum number of cells or graphs a command may build.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Bypass the enumeration cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// List isomorphism classes of reduced thorned graphs.
    Enumerate(EnumerateArgs),
    /// Homology of the spine quotient.
    Homology(HomologyArgs),
    /// Map induced on homology by a stabilization.
    StabMap(StabMapArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Compare homology of Z and Δ(Z) on a random corpus.
    DeltaCheck(DeltaArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Homology(_) => "homology",
            Command::StabMap(_) => "stab-map",
            Command::Verify(_) => "verify",
            Command::DeltaCheck(_) => "delta-check",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Verify(a) => Some(a.seed),
            Command::DeltaCheck(a) => Some(a.seed),
            _ => None,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub marks: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub degree_max: Option<i64>,
    #[arg(long)]
    pub require_basepoint_loop: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    Q,
    Z,
}

#[derive(Debug, Args, Serialize)]
pub struct HomologyArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub marks: usize,
    /// Only graphs with a loop at the basepoint.
    #[arg(long = "restrict-L")]
    pub restrict_l: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub degree_max: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, value_enum, default_value_t = Coeff::Q)]
    pub coeff: Coeff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapArg {
    Alpha,
    Mu,
    Beta,
}

impl From<MapArg> for StabilizationKind {
    fn from(m: MapArg) -> Self {
        match m {
            MapArg::Alpha => StabilizationKind::Alpha,
            MapArg::Mu => StabilizationKind::Mu,
            MapArg::Beta => StabilizationKind::Beta,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct StabMapArgs {
    #[arg(long, value_enum)]
    pub map: MapArg,
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub marks: usize,
    /// Homological degree.
    #[arg(long, default_value_t = 0)]
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Lemma,
    Diagrams,
    Delta,
    Pattern,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma => Suite::Lemma,
            SuiteArg::Diagrams => Suite::Diagrams,
            SuiteArg::Delta => Suite::Delta,
            SuiteArg::Pattern => Suite::Pattern,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Random samples per randomized identity.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DeltaArgs {
    /// Random complexes in the corpus.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}
