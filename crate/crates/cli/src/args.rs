use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Smallest node count accepted by `-N`.
pub const MIN_NODES: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "curvalign",
    version,
    about = "Rigid and elastic alignment of planar closed curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic curve, optionally shifted, rotated and warped.
    Gen(GenArgs),
    /// Optimal starting point and rotation between two curves.
    Align(AlignArgs),
    /// Elastic shape distance between two curves.
    Distance(DistanceArgs),
    /// Pairwise elastic distances between curve files.
    Matrix(MatrixArgs),
    /// Time the naive and FFT rigid aligners on the recovery fixture.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RigidMethod {
    Naive,
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Approach {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_NODES {
        return Err(format!("needs at least {MIN_NODES} nodes"));
    }
    Ok(n)
}

/// Benchmark node counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let sizes = s
        .split(',')
        .map(|p| parse_nodes(p.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err("sizes must be strictly ascending".into());
    }
    Ok(Sizes(sizes))
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// superellipse, hippopede, bumps, limacon, clover, circle or fourier_random.
    pub family: String,
    #[arg(short = 'N', default_value_t = 256, value_parser = parse_nodes)]
    pub n: usize,
    /// Seed for fourier_random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Move the starting point by this fraction of arc length.
    #[arg(long, default_value_t = 0.0)]
    pub shift: f64,
    /// Counterclockwise rotation in radians.
    #[arg(long, default_value_t = 0.0)]
    pub rotate: f64,
    /// identity, gamma1 or gamma2.
    #[arg(long, default_value = "identity")]
    pub warp: String,
    /// Defaults to the `--out` extension, else csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    pub reference: PathBuf,
    pub template: PathBuf,
    #[arg(short = 'N', default_value_t = 256, value_parser = parse_nodes)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "fft")]
    pub method: RigidMethod,
    /// Keep the input nodes instead of resampling uniformly in arc length.
    #[arg(long)]
    pub no_resample: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ElasticArgs {
    #[arg(short = 'N', default_value_t = 256, value_parser = parse_nodes)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "2")]
    pub approach: Approach,
    /// Starting point and rotation search used by approach 2.
    #[arg(long, value_enum, default_value = "fft")]
    pub method: RigidMethod,
    /// Approach 2 iteration cap.
    #[arg(long, default_value_t = 30)]
    pub max_iters: usize,
    /// Approach 2 stops once an iteration gains less than this.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub elastic: ElasticArgs,
    /// Keep the input nodes instead of resampling uniformly in arc length.
    #[arg(long)]
    pub no_resample: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Curve files, or a single directory whose .csv and .json files are used.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub elastic: ElasticArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated node counts, strictly ascending.
    #[arg(long, value_parser = parse_sizes, default_value = "64,128,256,512,1024,2048,4096")]
    pub sizes: Sizes,
    #[arg(long, default_value = "limacon")]
    pub family: String,
    /// Seed for fourier_random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Timed runs per size; the median is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
    pub runs: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
