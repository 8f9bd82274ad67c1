use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdgsp::stationarity::NoiseKind;

#[derive(Debug, Parser)]
#[command(name = "mdgsp", version, about = "Signal processing on Cartesian product graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartesian product of two graph files.
    Product(ProductArgs),
    /// Eigendecomposition of one graph's Laplacian or adjacency matrix.
    Eig(EigArgs),
    /// 2-D graph Fourier transform, or its inverse with --spectrum.
    Gft(GftArgs),
    /// Spectral or vertex-domain filtering with a kernel file.
    Filter(FilterArgs),
    /// Energy-model denoising; comma-separated weights run a parallel sweep.
    Denoise(DenoiseArgs),
    /// Total directional variation of a signal.
    Variation(VariationArgs),
    /// Synthesize or test stationary processes.
    Stationarity(StationarityArgs),
    /// Time the separable transform against the materialized-basis transform.
    Bench(BenchArgs),
    /// Render a spectrum CSV as an SVG heatmap.
    Render(RenderArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Laplacian,
    Adjacency,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long)]
    pub g1: PathBuf,
    #[arg(long)]
    pub g2: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[command(flatten)]
    pub graphs: Pair,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    #[arg(long)]
    pub g1: PathBuf,
    #[arg(long, value_enum, default_value = "laplacian")]
    pub operator: Operator,
    #[arg(long)]
    pub out: PathBuf,
    /// `csv` writes eigenvalues only; `json` adds eigenvectors.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GftArgs {
    #[command(flatten)]
    pub graphs: Pair,
    #[arg(long, required_unless_present = "spectrum", conflicts_with = "spectrum")]
    pub signal: Option<PathBuf>,
    /// Spectrum CSV to invert back to a signal.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "laplacian")]
    pub operator: Operator,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Also render the power spectrum as an SVG heatmap.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Multiplicity tolerance factor used when grouping frequencies.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterDomain {
    Spectral,
    Vertex,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub graphs: Pair,
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long)]
    pub kernel: PathBuf,
    /// `vertex` needs a polynomial kernel and skips the eigendecomposition.
    #[arg(long, value_enum, default_value = "spectral")]
    pub domain: FilterDomain,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[command(flatten)]
    pub graphs: Pair,
    #[arg(long)]
    pub observation: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q2: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub gamma1: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub gamma2: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Relative energy decrease at which descent stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Use descent even when the closed form applies.
    #[arg(long)]
    pub iterative: bool,
    /// Minimizer CSV; a sweep writes `<stem>.<index>.csv` per weight pair.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VariationArgs {
    #[command(flatten)]
    pub graphs: Pair,
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub direction: u8,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-vertex local variation CSV.
    #[arg(long)]
    pub local: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Synthesize,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessKind {
    Fgw,
    Dir1,
    Dir2,
    Mv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Noise {
    Gaussian,
    Rademacher,
}

impl From<Noise> for NoiseKind {
    fn from(n: Noise) -> Self {
        match n {
            Noise::Gaussian => NoiseKind::Gaussian,
            Noise::Rademacher => NoiseKind::Rademacher,
        }
    }
}

#[derive(Debug, Args)]
pub struct StationarityArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, value_enum)]
    pub kind: ProcessKind,
    #[arg(long)]
    pub g1: PathBuf,
    /// Not used by `mv`.
    #[arg(long)]
    pub g2: Option<PathBuf>,
    /// Filter coefficients (JSON): a matrix for `fgw`, a list of matrices otherwise.
    #[arg(long, conflicts_with = "gamma")]
    pub coeffs: Option<PathBuf>,
    /// Target spectral variances (JSON), converted to coefficients.
    #[arg(long)]
    pub gamma: Option<PathBuf>,
    /// Number of variates for `mv` when neither file fixes it.
    #[arg(long)]
    pub variates: Option<usize>,
    /// Samples file (MDGSPMAT, one flattened sample per row); read in test mode.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub noise: Noise,
    /// Threshold for the normalized statistics; defaults to 5/√M.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Samples output in synthesize mode.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sizes as `N1xN2`, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<String>,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    /// Largest product size for the naive path; 0 disables the cap.
    #[arg(long, default_value_t = 4096)]
    pub naive_max_vertices: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub svg: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
