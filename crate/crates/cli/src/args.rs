use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcenter::KernelSpec;

#[derive(Debug, Parser)]
#[command(
    name = "kcenter",
    version,
    about = "Spectra of centered and non-centered Gram matrices, their bound checks, kernel PCA/ECA and classical MDS",
    after_help = "Exit status: 0 on success, 1 when `verify` finds a failed check, 2 on usage, input or I/O errors."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of K and of its centered version, side by side.
    Eigen(EigenArgs),
    /// Run every relation check and report margins; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Cumulative d′ against cumulative centered eigenvalues, t = 1..n.
    Bounds(CommonArgs),
    /// Kernel PCA scores, or projection values over a grid for 2-D data.
    Kpca(KpcaArgs),
    /// Per-eigenpair entropy terms and the selected eigenpairs.
    Keca(KecaArgs),
    /// Classical MDS embedding from a distance matrix or from data.
    Mds(MdsArgs),
    /// Write a banana-shaped dataset as CSV.
    BananaGen(BananaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Iris,
    Banana,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CenteringKind {
    Mean,
    None,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    /// Coefficients αⱼ/√λⱼ.
    Variance,
    /// Coefficients αⱼ/λⱼ; training scores equal the eigenvectors.
    Unit,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Built-in dataset.
    #[arg(long, value_enum)]
    pub dataset: Option<Builtin>,
    /// CSV file, one sample per row.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// The last CSV column holds integer labels.
    #[arg(long)]
    pub labels: bool,
    /// CSV field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Number of banana samples.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Standard deviation of the banana noise.
    #[arg(long, default_value_t = 0.2)]
    pub noise: f64,
    /// Seed of the banana generator.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CenteringArgs {
    /// Centering scheme; `weighted` needs --weights.
    #[arg(long, value_enum)]
    pub centering: Option<CenteringKind>,
    /// Weight file (one value per sample, summing to 1) for weighted centering.
    #[arg(long, value_name = "PATH")]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Kernel: linear, poly:C:P, gaussian:SIGMA or neg-half-sqdist.
    #[arg(long, default_value = "linear", value_parser = parse_kernel)]
    pub kernel: KernelSpec,
    #[command(flatten)]
    pub centering: CenteringArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Report only the leading M eigenvalues.
    #[arg(short = 'm', value_name = "M")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Replace the relative tolerance of a check, e.g. --tol interlacing=1e-6.
    #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_override)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct KpcaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of components.
    #[arg(short = 'm', value_name = "M", default_value_t = 5)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = NormalizationArg::Variance)]
    pub normalization: NormalizationArg,
    /// Evaluate the components on a GRID×GRID lattice over the data bounding
    /// box (10% margin). Needs 2-D data.
    #[arg(long, value_name = "GRID", num_args = 0..=1, default_missing_value = "100")]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct KecaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of eigenpairs to select.
    #[arg(short = 'm', value_name = "M", default_value_t = 3)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MdsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Square CSV distance matrix, used instead of a dataset.
    #[arg(long, value_name = "PATH")]
    pub distances: Option<PathBuf>,
    /// Embedding dimension.
    #[arg(short = 'm', value_name = "M", default_value_t = 2)]
    pub m: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BananaArgs {
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 0.2)]
    pub noise: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_kernel(s: &str) -> Result<KernelSpec, String> {
    s.parse().map_err(|e: kcenter::Error| e.to_string())
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("tolerance for {name:?} is not a number: {value:?}"))?;
    if v.is_nan() {
        return Err(format!("tolerance for {name:?} is NaN"));
    }
    Ok((name.trim().to_string(), v))
}
