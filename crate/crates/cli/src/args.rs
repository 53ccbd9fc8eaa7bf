use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use eigdeloc::{EntryKind, Field};

#[derive(Debug, Parser)]
#[command(
    name = "eigdeloc",
    version,
    about = "Eigenvector delocalization experiments for non-Hermitian random matrices",
    args_override_self = true,
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one matrix and print it in the text matrix format.
    Gen(GenArgs),
    /// Eigenvalues and residuals of a sampled or stored matrix.
    Spectrum(SpectrumArgs),
    /// Worst subset mass of eigenvectors across trials.
    Deloc(DelocArgs),
    /// Tail of the smallest singular value of A - lambda.
    SminTail(SminTailArgs),
    /// Tail of the distance from a random vector to a random subspace.
    DistTail(DistTailArgs),
    /// Kernel vectors of (n-1) x n matrices against the sphere limits.
    NormalVector(NormalArgs),
    /// Least common denominator of a vector.
    Lcd(LcdArgs),
    /// Compressibility class and spread set of a vector.
    Compress(CompressArgs),
    /// Lévy concentration of a random sum with fixed coefficients.
    Levy(LevyArgs),
    /// Subset masses of uniform unit vectors.
    Baseline(BaselineArgs),
    /// Limiting lightest and heaviest subset masses.
    Quantile(QuantileArgs),
    /// Operator norm distribution.
    Opnorm(OpnormArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; does not affect results.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Flat `key = value` file supplying flags; command-line flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record wall-clock time in JSON reports.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Ensemble {
    #[arg(long, default_value = "complex")]
    pub field: Field,
    /// Entry law: gaussian, rademacher or uniform.
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EpsGrid {
    /// Explicit grid; overrides the log-spaced one.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub eps_lo: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps_hi: f64,
    #[arg(long, default_value_t = 10)]
    pub eps_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VectorInput {
    /// Real parts of the coordinates.
    #[arg(long, value_delimiter = ',', conflicts_with = "flat")]
    pub re: Vec<f64>,
    /// Imaginary parts; zero if omitted.
    #[arg(long, value_delimiter = ',', conflicts_with = "flat")]
    pub im: Vec<f64>,
    /// The flat unit vector with `n` coordinates `1/sqrt(n)`.
    #[arg(long)]
    pub flat: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ensemble: Ensemble,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matrix file written by `gen`; otherwise a matrix is sampled.
    #[arg(long, conflicts_with_all = ["rows", "cols"])]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DelocArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    /// Subset sizes; defaults to ceil(n/10).
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub eig_tol: f64,
}

#[derive(Debug, Args)]
pub struct SminTailArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ensemble: Ensemble,
    #[command(flatten)]
    pub grid: EpsGrid,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_im: f64,
    /// Shifts must satisfy |lambda| <= M sqrt(rows).
    #[arg(long, default_value_t = 4.0)]
    pub big_m: f64,
    #[arg(long, default_value_t = 10000)]
    pub trials: usize,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistTailArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ambient dimension.
    #[arg(long)]
    pub big_n: usize,
    /// Codimension of the subspace.
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[command(flatten)]
    pub grid: EpsGrid,
    #[arg(long, default_value_t = 10000)]
    pub trials: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[arg(long, value_delimiter = ',', default_value = "0.2")]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct LcdArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub vector: VectorInput,
    /// Search over real or complex multipliers.
    #[arg(long)]
    pub field: Option<Field>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    #[arg(long, default_value_t = 60)]
    pub refine_iters: usize,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub vector: VectorInput,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nu2: f64,
    #[arg(long, default_value_t = 2.0)]
    pub nu3: f64,
}

#[derive(Debug, Args)]
pub struct LevyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub vector: VectorInput,
    /// Field of the random weights.
    #[arg(long, default_value = "real")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 10000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub delta: f64,
    /// Also print Q(s) and H(s) at these levels.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct OpnormArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    #[arg(long, default_value = "gaussian")]
    pub dist: EntryKind,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Gen(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Deloc(a) => &a.common,
            Command::SminTail(a) => &a.common,
            Command::DistTail(a) => &a.common,
            Command::NormalVector(a) => &a.common,
            Command::Lcd(a) => &a.common,
            Command::Compress(a) => &a.common,
            Command::Levy(a) => &a.common,
            Command::Baseline(a) => &a.common,
            Command::Quantile(a) => &a.common,
            Command::Opnorm(a) => &a.common,
        }
    }
}
