use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use idest::bench::{
    dolan_more, line_chart, mpe, noise_sweep, read_run_csv, run_suite, write_curves_csv, write_noise_csv,
    write_run_csv, Series,
};
use idest::io::read_cloud_file;
use idest::manifolds::{table1_suite, write_csv, GeneratedMetadata};
use idest::report::round_dimension;
use idest::{generate, EstimatorSettings, ManifoldSpec, Method};
use serde_json::json;

use crate::args::{
    parse_grid, BenchArgs, DolanMoreArgs, EstimateArgs, EstimatorArgs, GenerateArgs, NoiseArgs, SuiteArgs,
};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn settings(args: &EstimatorArgs, seed: u64) -> EstimatorSettings {
    let mut s = EstimatorSettings::default();
    s.geomle.seed = seed;
    if let Some(v) = args.k1 {
        s.geomle.k1 = v;
    }
    if let Some(v) = args.k2 {
        s.geomle.k2 = v;
    }
    if let Some(v) = args.bootstrap {
        s.geomle.bootstrap_count = v;
    }
    if let Some(v) = args.degree {
        s.geomle.degree = v;
    }
    if let Some(v) = args.variance_floor {
        s.geomle.variance_floor = v;
    }
    if let Some(v) = args.duplicate_epsilon {
        s.geomle.duplicate_epsilon = v;
        s.mle.duplicate_epsilon = v;
    }
    if let Some(v) = args.k {
        s.mle.k = v;
    }
    if let Some(v) = args.aggregation {
        s.mle.aggregation = v.into();
    }
    if let Some(v) = args.threshold {
        s.pca.explained_variance_threshold = v;
    }
    s
}

/// Validates the parts of the configuration that do not depend on a cloud, so
/// a bad flag is reported as a usage error instead of per-entry failures.
fn check_settings(s: &EstimatorSettings, methods: &[Method]) -> Result<()> {
    for m in methods {
        match m {
            Method::GeoMle => s.geomle.validate()?,
            Method::Pca => s.pca.validate()?,
            Method::Mle => {
                if s.mle.k < 2 {
                    return Err(CliError::Usage("config error: k ≥ 2".into()));
                }
            }
        }
    }
    Ok(())
}

pub fn generate_cmd(args: &GenerateArgs) -> Result<()> {
    let spec = ManifoldSpec::new(args.spec.kind, args.spec.m, args.spec.p, args.spec.n, args.seed);
    let data = generate(&spec)?;
    let mut out = create(&args.out)?;
    write_csv(&data.cloud, &mut out, args.header)?;
    out.flush()?;
    let meta = GeneratedMetadata { spec, seed: args.seed, true_dim: data.true_dim };
    let meta_path = sibling(&args.out, "meta.json");
    write_text(&meta_path, &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    println!("{}", meta_path.display());
    Ok(())
}

pub fn estimate_cmd(args: &EstimateArgs) -> Result<()> {
    let s = settings(&args.estimator, args.seed);
    check_settings(&s, &[args.method])?;
    let cloud = read_cloud_file(&args.input)?;
    let report = s.estimate(&cloud, args.method)?;
    let text = report.to_json()? + "\n";
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None if !args.round => io::stdout().write_all(text.as_bytes())?,
        None => {}
    }
    if args.round {
        println!("{}", round_dimension(report.global_estimate));
    }
    Ok(())
}

fn load_suite(args: &SuiteArgs) -> Result<Vec<ManifoldSpec>> {
    match (&args.builtin, &args.suite) {
        (Some(name), None) if name == "table1" => Ok(table1_suite(args.n)),
        (Some(name), None) => Err(CliError::Usage(format!("unknown builtin suite `{name}` (expected table1)"))),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Data(format!("cannot read suite {}: {e}", path.display())))?;
            let specs: Vec<ManifoldSpec> = serde_json::from_str(&text)
                .map_err(|e| CliError::Data(format!("bad suite {}: {e}", path.display())))?;
            if specs.is_empty() {
                return Err(CliError::Data(format!("suite {} is empty", path.display())));
            }
            for spec in &specs {
                spec.validate()?;
            }
            Ok(specs)
        }
        _ => Err(CliError::Usage("give --builtin table1 or --suite FILE".into())),
    }
}

pub fn bench_cmd(args: &BenchArgs) -> Result<()> {
    let specs = load_suite(&args.suite)?;
    let s = settings(&args.estimator, 0);
    check_settings(&s, &args.methods)?;
    let run = run_suite(&specs, &args.methods, args.replicates, args.seed, &s)?;
    if run.entries.iter().all(|e| e.estimate.is_none()) {
        return Err(CliError::Numerical(format!("all {} benchmark entries failed", run.entries.len())));
    }
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_run_csv(&run, &mut out)?;
            out.flush()?;
            let means: Vec<_> = run
                .mean_estimates()
                .iter()
                .map(|m| {
                    json!({
                        "dataset": m.dataset,
                        "method": m.method,
                        "true_dim": m.true_dim,
                        "mean_estimate": m.mean(),
                        "replicates": m.count,
                    })
                })
                .collect();
            let mpes: serde_json::Map<String, serde_json::Value> = args
                .methods
                .iter()
                .filter_map(|&m| mpe(&run, m).ok().map(|v| (m.name().to_string(), json!(v))))
                .collect();
            let summary = json!({ "mean_estimates": means, "mpe": mpes });
            let summary_path = sibling(path, "summary.json");
            write_text(&summary_path, &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            println!("{}", path.display());
        }
        None => write_run_csv(&run, io::stdout().lock())?,
    }
    Ok(())
}

pub fn noise_cmd(args: &NoiseArgs) -> Result<()> {
    let specs = match (args.kind, args.m, args.p) {
        (Some(kind), Some(m), Some(p)) => {
            let spec = ManifoldSpec::new(kind, m, p, args.n, 0);
            spec.validate()?;
            vec![spec]
        }
        (Some(_), _, _) => return Err(CliError::Usage("--kind needs --m and --p".into())),
        (None, _, _) => {
            load_suite(&SuiteArgs { builtin: args.builtin.clone(), suite: args.suite.clone(), n: args.n })?
        }
    };
    let sigmas = parse_grid(&args.sigmas).map_err(CliError::Usage)?;
    let s = settings(&args.estimator, 0);
    check_settings(&s, &args.methods)?;
    let rows = noise_sweep(&specs, &args.methods, &sigmas, args.replicates, args.seed, &s)?;
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_noise_csv(&rows, &mut out)?;
            out.flush()?;
            let series: Vec<Series> = args
                .methods
                .iter()
                .map(|&m| Series {
                    name: m.name().into(),
                    points: rows.iter().filter(|r| r.method == m).map(|r| (r.sigma, r.mpe)).collect(),
                })
                .collect();
            let svg = line_chart("Noise sensitivity", "noise σ", "mean percentage error", &series);
            write_text(&sibling(path, "svg"), &svg)?;
            println!("{}", path.display());
        }
        None => write_noise_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

pub fn dolan_more_cmd(args: &DolanMoreArgs) -> Result<()> {
    let taus = parse_grid(&args.taus).map_err(CliError::Usage)?;
    let file = File::open(&args.run)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.run.display())))?;
    let run = read_run_csv(io::BufReader::new(file))?;
    let curves = dolan_more(&run, &taus)?;
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_curves_csv(&curves, &mut out)?;
            out.flush()?;
            let series: Vec<Series> = curves
                .iter()
                .map(|c| Series {
                    name: c.method.name().into(),
                    points: c.taus.iter().copied().zip(c.fractions.iter().copied()).collect(),
                })
                .collect();
            let svg = line_chart("Dolan–More performance profile", "τ", "fraction of problems", &series);
            write_text(&sibling(path, "svg"), &svg)?;
            println!("{}", path.display());
        }
        None => write_curves_csv(&curves, io::stdout().lock())?,
    }
    Ok(())
}
