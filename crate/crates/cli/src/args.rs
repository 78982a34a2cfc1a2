//! Command-line schema. Every struct also serializes into the run's config
//! hash: output locations are skipped and input files hash by content, so a
//! run is identified by what it computes, not where it writes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use foilspace::activesubspace::Convention;
use foilspace::analysis::ZPolicy;
use foilspace::qoi::{Parameterization, RidgeProfile};

#[derive(Parser, Debug)]
#[command(
    name = "foilspace",
    version,
    about = "Active subspaces of parameterized airfoil shapes",
    long_about = "Samples PARSEC/CST parameter boxes, evaluates a quantity of interest, fits a \
                  global quadratic model and reports active subspaces, bootstrap spreads, shadow \
                  plots and lift/drag trade-off curves. Every flag can also be set through a \
                  FOILSPACE_* environment variable."
)]
pub struct Cli {
    /// Root seed; all randomness derives from it.
    #[arg(long, global = true, env = "FOILSPACE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Output directory (created if missing).
    #[arg(long, global = true, env = "FOILSPACE_OUT", default_value = "out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Draw uniform samples from a parameter box (normalized coordinates).
    Sample(SampleArgs),
    /// Export airfoil coordinate files for sampled designs.
    Shapes(ShapesArgs),
    /// Evaluate a quantity of interest at sampled designs.
    Evaluate(EvaluateArgs),
    /// Fit the global quadratic model to evaluated samples.
    Fit(InputArgs),
    /// Eigendecomposition of the quadratic model's gradient outer product.
    Eigs(EigsArgs),
    /// Bootstrap spreads of eigenvalues and subspace errors.
    Bootstrap(BootstrapArgs),
    /// Shadow plot data and a low-dimensional link function.
    Shadow(ShadowArgs),
    /// Lift/drag trade-off curve in drag's two active coordinates.
    Pareto(ParetoArgs),
    /// Subspace error against sample size.
    Convergence(ConvergenceArgs),
    /// Check that a parameter vector gives a valid airfoil.
    Validate(ValidateArgs),
    /// Sample, evaluate, estimate, bootstrap and plot in one go.
    RunAll(RunAllArgs),
}

pub fn hash_file<S: Serializer>(path: &Path, s: S) -> Result<S::Ok, S::Error> {
    match std::fs::read(path) {
        Ok(bytes) => s.serialize_str(&format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))),
        Err(_) => s.serialize_str(&format!("unreadable:{}", path.display())),
    }
}

fn hash_opt_file<S: Serializer>(path: &Option<PathBuf>, s: S) -> Result<S::Ok, S::Error> {
    match path {
        Some(p) => hash_file(p, s),
        None => s.serialize_none(),
    }
}

/// Built-in names serialize as themselves, files by content.
fn hash_box<S: Serializer>(spec: &str, s: S) -> Result<S::Ok, S::Error> {
    if foilspace::sampling::builtin_box(spec).is_some() {
        s.serialize_str(spec)
    } else {
        hash_file(Path::new(spec), s)
    }
}

fn hash_qoi<S: Serializer>(spec: &str, s: S) -> Result<S::Ok, S::Error> {
    match spec.strip_prefix("dataset:") {
        Some(path) => hash_file(Path::new(path), s),
        None => s.serialize_str(spec),
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoxArgs {
    /// Parameter box: parsec-table2, cst-table3, unit:M, or a JSON file.
    #[arg(long = "box", env = "FOILSPACE_BOX", default_value = "cst-table3")]
    #[serde(serialize_with = "hash_box")]
    pub box_spec: String,

    /// Shape family for panel evaluation and shape export (inferred from the box if omitted).
    #[arg(long, value_enum, env = "FOILSPACE_PARAMETERIZATION")]
    pub parameterization: Option<ParameterizationArg>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct QoiArgs {
    /// quadratic | ridge | panel-lift | panel-drag | panel (run-all only) | dataset:PATH
    #[arg(long, env = "FOILSPACE_QOI", default_value = "ridge")]
    #[serde(serialize_with = "hash_qoi")]
    pub qoi: String,

    #[arg(
        long,
        value_enum,
        env = "FOILSPACE_RIDGE_PROFILE",
        default_value = "linear"
    )]
    pub ridge_profile: RidgeProfileArg,

    /// Comma-separated ridge direction (default: w_i = 1 / i).
    #[arg(long, env = "FOILSPACE_RIDGE_WEIGHTS", value_delimiter = ',')]
    pub ridge_weights: Option<Vec<f64>>,

    /// Standard deviation of deterministic additive noise.
    #[arg(long, env = "FOILSPACE_NOISE", default_value_t = 0.0)]
    pub noise: f64,

    /// Max-norm distance for dataset lookups.
    #[arg(long, env = "FOILSPACE_TOLERANCE", default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub boxed: BoxArgs,

    #[arg(long, env = "FOILSPACE_N", default_value_t = 100)]
    pub n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ShapesArgs {
    /// Sample CSV (x1..xm[,f]).
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,

    #[command(flatten)]
    pub boxed: BoxArgs,

    /// Points per surface.
    #[arg(long, env = "FOILSPACE_GRID", default_value_t = 201)]
    pub grid: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct EvaluateArgs {
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,

    #[command(flatten)]
    pub boxed: BoxArgs,

    #[command(flatten)]
    pub qoi: QoiArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct InputArgs {
    /// Evaluated CSV (x1..xm,f).
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct EstimatorArgs {
    #[arg(
        long,
        value_enum,
        env = "FOILSPACE_CONVENTION",
        default_value = "identity"
    )]
    pub convention: ConventionArg,

    /// Active dimension (chosen from the largest eigenvalue gap if omitted).
    #[arg(long, env = "FOILSPACE_DIM")]
    pub dim: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct EigsArgs {
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,

    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BootstrapArgs {
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,

    #[command(flatten)]
    pub estimator: EstimatorArgs,

    #[arg(long, env = "FOILSPACE_NBOOT", default_value_t = 100)]
    pub nboot: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ShadowArgs {
    #[arg(long, env = "FOILSPACE_INPUT")]
    #[serde(serialize_with = "hash_file")]
    pub input: PathBuf,

    #[arg(
        long,
        value_enum,
        env = "FOILSPACE_CONVENTION",
        default_value = "identity"
    )]
    pub convention: ConventionArg,

    /// Number of active coordinates to plot (1 or 2).
    #[arg(long, env = "FOILSPACE_DIM", default_value_t = 1)]
    pub dim: usize,

    /// Project onto the eigenvectors of another evaluated CSV instead.
    #[arg(long, env = "FOILSPACE_BASIS_FROM")]
    #[serde(serialize_with = "hash_opt_file")]
    pub basis_from: Option<PathBuf>,

    /// Total degree of the link-function polynomial.
    #[arg(long, env = "FOILSPACE_DEGREE", default_value_t = 2)]
    pub degree: u32,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct TradeoffArgs {
    #[arg(long, env = "FOILSPACE_GAMMA_COUNT", default_value_t = foilspace::analysis::DEFAULT_GAMMA_COUNT)]
    pub gamma_count: usize,

    #[arg(long, value_enum, env = "FOILSPACE_Z_POLICY", default_value = "zero")]
    pub z_policy: ZPolicyArg,

    #[arg(long, env = "FOILSPACE_LIFT_DEGREE", default_value_t = 1)]
    pub lift_degree: u32,

    #[arg(long, env = "FOILSPACE_DRAG_DEGREE", default_value_t = 2)]
    pub drag_degree: u32,

    /// Leave predictions empty at designs outside the box.
    #[arg(long, env = "FOILSPACE_STRICT")]
    pub strict: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ParetoArgs {
    /// Evaluated lift CSV.
    #[arg(long, env = "FOILSPACE_LIFT")]
    #[serde(serialize_with = "hash_file")]
    pub lift: PathBuf,

    /// Evaluated drag CSV on the same designs.
    #[arg(long, env = "FOILSPACE_DRAG")]
    #[serde(serialize_with = "hash_file")]
    pub drag: PathBuf,

    #[arg(
        long,
        value_enum,
        env = "FOILSPACE_CONVENTION",
        default_value = "identity"
    )]
    pub convention: ConventionArg,

    #[command(flatten)]
    pub tradeoff: TradeoffArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub boxed: BoxArgs,

    #[command(flatten)]
    pub qoi: QoiArgs,

    /// Comma-separated ascending sample sizes.
    #[arg(
        long,
        env = "FOILSPACE_SCHEDULE",
        value_delimiter = ',',
        default_value = "100,200,400,800,1600,3200,6400"
    )]
    pub schedule: Vec<usize>,

    #[arg(long, env = "FOILSPACE_NBOOT", default_value_t = 100)]
    pub nboot: usize,

    #[arg(
        long,
        value_enum,
        env = "FOILSPACE_CONVENTION",
        default_value = "identity"
    )]
    pub convention: ConventionArg,

    #[arg(long, env = "FOILSPACE_DIM", default_value_t = 1)]
    pub dim: usize,

    /// Abort on the first failed evaluation instead of dropping it.
    #[arg(long, env = "FOILSPACE_FAIL_FAST")]
    pub fail_fast: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub boxed: BoxArgs,

    /// Comma-separated physical parameters (default: the box center).
    #[arg(
        long,
        env = "FOILSPACE_PARAMS",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub params: Option<Vec<f64>>,

    /// Treat the parameters as normalized coordinates in [-1, 1].
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct RunAllArgs {
    #[command(flatten)]
    pub boxed: BoxArgs,

    #[command(flatten)]
    pub qoi: QoiArgs,

    #[arg(long, env = "FOILSPACE_N", default_value_t = 1000)]
    pub n: usize,

    #[command(flatten)]
    pub estimator: EstimatorArgs,

    #[arg(long, env = "FOILSPACE_NBOOT", default_value_t = 100)]
    pub nboot: usize,

    #[command(flatten)]
    pub tradeoff: TradeoffArgs,

    /// Also run a convergence study over these sample sizes.
    #[arg(long, env = "FOILSPACE_SCHEDULE", value_delimiter = ',')]
    pub schedule: Option<Vec<usize>>,

    /// Export coordinate files for every sampled design.
    #[arg(long)]
    pub shapes: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    /// C = H^2 + v v^T
    Identity,
    /// C = H^2 / 3 + v v^T
    Third,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Identity => Convention::Identity,
            ConventionArg::Third => Convention::Third,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterizationArg {
    Parsec,
    Cst,
}

impl From<ParameterizationArg> for Parameterization {
    fn from(p: ParameterizationArg) -> Self {
        match p {
            ParameterizationArg::Parsec => Parameterization::Parsec,
            ParameterizationArg::Cst => Parameterization::Cst,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RidgeProfileArg {
    Linear,
    Quadratic,
    Exp,
}

impl From<RidgeProfileArg> for RidgeProfile {
    fn from(p: RidgeProfileArg) -> Self {
        match p {
            RidgeProfileArg::Linear => RidgeProfile::Linear,
            RidgeProfileArg::Quadratic => RidgeProfile::Quadratic,
            RidgeProfileArg::Exp => RidgeProfile::Exp,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZPolicyArg {
    Zero,
    RandomFeasible,
}

impl From<ZPolicyArg> for ZPolicy {
    fn from(p: ZPolicyArg) -> Self {
        match p {
            ZPolicyArg::Zero => ZPolicy::Zero,
            ZPolicyArg::RandomFeasible => ZPolicy::RandomFeasible,
        }
    }
}
