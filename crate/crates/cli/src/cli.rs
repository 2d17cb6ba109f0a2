//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copent_core::{PairVariant, TiePolicy};

#[derive(Debug, Parser)]
#[command(
    name = "copent",
    version,
    about = "Copula entropy estimation and correlation-entropy budgets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Copula entropy of the columns of a CSV file.
    Ce(EstimateArgs),
    /// Joint, marginal and copula entropies of a CSV file and the residual
    /// of joint = Σ marginals + copula.
    Decompose(EstimateArgs),
    /// Run a canonical Metropolis simulation from a key=value config file.
    Simulate(SimulateArgs),
    /// Entropy budget of a simulated trajectory.
    Budget(BudgetArgs),
    /// Print analytic and quadrature reference values.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Write a seeded Gaussian-copula sample to CSV.
    SampleGaussian(SampleGaussianArgs),
    /// Extractable work W = E − T·ΔS.
    Work(WorkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Average,
    Dense,
    Jitter,
}

impl TieArg {
    pub fn policy(self, seed: u64) -> TiePolicy {
        match self {
            TieArg::Average => TiePolicy::Average,
            TieArg::Dense => TiePolicy::Dense,
            TieArg::Jitter => TiePolicy::Jitter { seed },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with a header row and at least two numeric columns.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = copent_core::DEFAULT_K)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = TieArg::Average)]
    pub tie_policy: TieArg,
    /// Seed for the jitter tie policy (overrides COPENT_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides COPENT_SEED and the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's output_prefix; writes <prefix>.csv and <prefix>.json.
    #[arg(long)]
    pub output_prefix: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Green,
    Paper,
}

impl From<VariantArg> for PairVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Green => PairVariant::Green,
            VariantArg::Paper => PairVariant::Paper,
        }
    }
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub trajectory: PathBuf,
    #[arg(long)]
    pub metadata: PathBuf,
    /// Two-body integrand used for the headline total.
    #[arg(long, value_enum, default_value_t = VariantArg::Green)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = copent_core::DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = copent_core::correlation::DEFAULT_RDF_BINS)]
    pub bins: usize,
    /// Defaults to half the box length.
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write g(r) as `bin_center,g` CSV.
    #[arg(long)]
    pub rdf_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    Ideal,
    Cosine,
    LennardJones,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// ½·ln det R for an equicorrelated R.
    GaussianCe {
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// ½·ln((2πe)^d det Σ) for Σ = variance · equicorrelated(rho).
    GaussianEntropy {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
    },
    /// Quadrature correlation entropy of 2 or 3 particles on a periodic line.
    GridCe {
        #[arg(long, value_enum, default_value_t = PotentialArg::Cosine)]
        potential: PotentialArg,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 2.5)]
        r_cut: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 512)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        particles: usize,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
    },
    /// Maxwell–Boltzmann momentum entropy per particle.
    MomentumEntropy {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 3)]
        dimension: usize,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarginalArg {
    Normal,
    Uniform,
}

#[derive(Debug, Args)]
pub struct SampleGaussianArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `uniform` pushes each column through the normal CDF.
    #[arg(long, value_enum, default_value_t = MarginalArg::Normal)]
    pub marginal: MarginalArg,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct WorkArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub energy: f64,
    #[arg(long)]
    pub temperature: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_s: f64,
}
