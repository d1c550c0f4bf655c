use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idest::{Aggregation, ManifoldKind, Method};

#[derive(Debug, Parser)]
#[command(name = "idest", version, about = "Intrinsic dimension estimation for point clouds")]
pub struct Cli {
    /// Worker threads (falls back to IDEST_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic manifold into a CSV file plus a metadata sidecar.
    Generate(GenerateArgs),
    /// Estimate the intrinsic dimension of a CSV point cloud.
    Estimate(EstimateArgs),
    /// Run every method over a suite of synthetic manifolds.
    Bench(BenchArgs),
    /// Mean percentage error as a function of Gaussian noise level.
    Noise(NoiseArgs),
    /// Dolan–More performance profiles from a benchmark run CSV.
    DolanMore(DolanMoreArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: ManifoldKind,
    /// Intrinsic dimension.
    #[arg(long)]
    pub m: usize,
    /// Ambient dimension.
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Write an `x0,x1,…` header row.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    Mean,
    InverseMean,
}

impl From<AggregationArg> for Aggregation {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::Mean => Aggregation::Mean,
            AggregationArg::InverseMean => Aggregation::InverseMean,
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    /// Bootstrap replicates M.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Polynomial degree of the GeoMLE regression.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub variance_floor: Option<f64>,
    #[arg(long)]
    pub duplicate_epsilon: Option<f64>,
    /// Neighbors for the plain MLE.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub aggregation: Option<AggregationArg>,
    /// PCA explained-variance threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[arg(long, value_parser = parse_method, default_value = "geomle")]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Print only the integer dimension (round half away from zero).
    #[arg(long)]
    pub round: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Built-in suite name (`table1`).
    #[arg(long, conflicts_with = "suite")]
    pub builtin: Option<String>,
    /// JSON file holding a list of manifold specs.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Points per cloud for the built-in suite.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub suite: SuiteArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "mle,geomle,pca")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Run CSV path; a `.summary.json` with per-dataset means is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, value_parser = parse_kind, conflicts_with_all = ["builtin", "suite"])]
    pub kind: Option<ManifoldKind>,
    #[arg(long, requires = "kind")]
    pub m: Option<usize>,
    #[arg(long, requires = "kind")]
    pub p: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, conflicts_with = "suite")]
    pub builtin: Option<String>,
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "0:0.05:0.01")]
    pub sigmas: String,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "mle,geomle,pca")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// CSV path; the chart goes to the same path with an `.svg` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DolanMoreArgs {
    pub run: PathBuf,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "1:10:0.25")]
    pub taus: String,
    /// CSV path; the chart goes to the same path with an `.svg` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown method `{s}` (expected mle, geomle or pca)"))
}

fn parse_kind(s: &str) -> Result<ManifoldKind, String> {
    ManifoldKind::parse(s).ok_or_else(|| {
        let names: Vec<&str> = ManifoldKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown manifold `{s}` (expected one of {})", names.join(", "))
    })
}

/// Parses `a:b:step` into the inclusive grid, or a comma-separated list.
///
/// Grid values are rounded to 12 decimals so `0:0.05:0.01` yields `0.03`, not
/// `0.030000000000000002`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}` in `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && step.is_finite() && a.is_finite() && b.is_finite() && b >= a) {
                return Err(format!("bad range `{s}`: need start ≤ stop and step > 0"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(format!("bad grid `{s}`")),
    }
}
