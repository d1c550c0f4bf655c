//! Benchmark harness: batch estimation over manifold suites, mean percentage
//! error, Dolan–More performance profiles and noise sweeps.

mod dolan_more;
mod persist;
mod svg;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::estimators::EstimatorSettings;
use crate::manifolds::{add_noise, generate, ManifoldSpec};
use crate::report::Method;
use crate::rng::derive_seed;

pub use dolan_more::{dolan_more, DolanMoreCurve, RATIO_EPSILON};
pub use persist::{read_run_csv, write_curves_csv, write_noise_csv, write_run_csv};
pub use svg::{line_chart, Series};

/// One (dataset, replicate, method) estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkEntry {
    /// Position of the spec in the suite; the primary sort key.
    pub spec_index: usize,
    /// Spec with the seed actually used to generate this replicate.
    pub spec: ManifoldSpec,
    pub dataset: String,
    pub replicate: usize,
    pub method: Method,
    pub true_dim: usize,
    /// `None` when the estimator failed; see `failure`.
    pub estimate: Option<f64>,
    pub failure: Option<String>,
    pub wall_time: f64,
}

impl BenchmarkEntry {
    pub fn abs_error(&self) -> Option<f64> {
        self.estimate.map(|e| (self.true_dim as f64 - e).abs())
    }

    /// Identity of the problem this entry belongs to.
    pub fn problem_key(&self) -> (usize, usize) {
        (self.spec_index, self.replicate)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRun {
    pub entries: Vec<BenchmarkEntry>,
}

impl BenchmarkRun {
    pub fn sort_canonical(&mut self) {
        self.entries.sort_by(|a, b| {
            (a.spec_index, a.replicate, a.method).cmp(&(b.spec_index, b.replicate, b.method))
        });
    }

    pub fn methods(&self) -> Vec<Method> {
        let mut methods: Vec<Method> = self.entries.iter().map(|e| e.method).collect();
        methods.sort();
        methods.dedup();
        methods
    }

    /// Mean estimate per (spec, method) over successful replicates, in suite order.
    pub fn mean_estimates(&self) -> Vec<MeanEstimate> {
        let mut out: Vec<MeanEstimate> = Vec::new();
        for e in &self.entries {
            let Some(est) = e.estimate else { continue };
            match out.iter_mut().find(|m| m.spec_index == e.spec_index && m.method == e.method) {
                Some(m) => {
                    m.sum += est;
                    m.count += 1;
                }
                None => out.push(MeanEstimate {
                    spec_index: e.spec_index,
                    dataset: e.dataset.clone(),
                    method: e.method,
                    true_dim: e.true_dim,
                    sum: est,
                    count: 1,
                }),
            }
        }
        out.sort_by_key(|m| (m.spec_index, m.method));
        out
    }

    pub fn mean_estimate(&self, spec_index: usize, method: Method) -> Option<f64> {
        self.mean_estimates()
            .into_iter()
            .find(|m| m.spec_index == spec_index && m.method == method)
            .map(|m| m.mean())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub spec_index: usize,
    pub dataset: String,
    pub method: Method,
    pub true_dim: usize,
    sum: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
}

/// Seed used to generate replicate `replicate` of suite entry `spec_index`.
pub fn cloud_seed(base_seed: u64, spec_index: usize, replicate: usize) -> u64 {
    derive_seed(base_seed, &[spec_index as u64, replicate as u64])
}

fn estimator_seed(base_seed: u64, spec_index: usize, replicate: usize) -> u64 {
    derive_seed(base_seed, &[spec_index as u64, replicate as u64, 1])
}

fn noise_seed(base_seed: u64, spec_index: usize, replicate: usize) -> u64 {
    derive_seed(base_seed, &[spec_index as u64, replicate as u64, 2])
}

fn run_cases<F>(
    specs: &[ManifoldSpec],
    methods: &[Method],
    replicates: usize,
    base_seed: u64,
    settings: &EstimatorSettings,
    transform: F,
) -> Result<BenchmarkRun>
where
    F: Fn(&PointCloud, usize, usize) -> Result<PointCloud> + Sync,
{
    if specs.is_empty() {
        return Err(Error::Config("benchmark suite has no datasets".into()));
    }
    if replicates == 0 {
        return Err(Error::Config("replicates ≥ 1".into()));
    }
    if methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    let cases: Vec<(usize, usize)> =
        (0..specs.len()).flat_map(|s| (0..replicates).map(move |r| (s, r))).collect();
    let entries: Vec<BenchmarkEntry> = cases
        .par_iter()
        .flat_map_iter(|&(spec_index, replicate)| {
            let spec = specs[spec_index].with_seed(cloud_seed(base_seed, spec_index, replicate));
            let cloud = generate(&spec).and_then(|lc| transform(&lc.cloud, spec_index, replicate));
            let mut local = *settings;
            local.geomle.seed = estimator_seed(base_seed, spec_index, replicate);
            methods
                .iter()
                .map(|&method| {
                    let start = Instant::now();
                    let outcome = cloud.as_ref().map_err(Clone::clone).and_then(|c| local.estimate(c, method));
                    let wall_time = start.elapsed().as_secs_f64().max(1e-9);
                    let (estimate, failure) = match outcome {
                        Ok(report) => (Some(report.global_estimate), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    BenchmarkEntry {
                        spec_index,
                        spec,
                        dataset: spec.dataset_name(),
                        replicate,
                        method,
                        true_dim: spec.m,
                        estimate,
                        failure,
                        wall_time,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut run = BenchmarkRun { entries };
    run.sort_canonical();
    Ok(run)
}

/// Generates `replicates` seeded clouds per spec and runs every method on each.
///
/// Estimator failures are recorded in the entry; they never abort the suite.
pub fn run_suite(
    specs: &[ManifoldSpec],
    methods: &[Method],
    replicates: usize,
    base_seed: u64,
    settings: &EstimatorSettings,
) -> Result<BenchmarkRun> {
    run_cases(specs, methods, replicates, base_seed, settings, |c, _, _| Ok(c.clone()))
}

/// Mean percentage error `(1/N) Σ |m − m̂| / m` over a method's successful entries.
pub fn mpe(run: &BenchmarkRun, method: Method) -> Result<f64> {
    let errors: Vec<f64> = run
        .entries
        .iter()
        .filter(|e| e.method == method)
        .filter_map(|e| e.abs_error().map(|err| err / e.true_dim as f64))
        .collect();
    if errors.is_empty() {
        return Err(Error::MissingEntries(format!("no successful {method} entries")));
    }
    Ok(errors.iter().sum::<f64>() / errors.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub sigma: f64,
    pub method: Method,
    pub mpe: f64,
}

/// MPE per (noise level, method).
///
/// Every noise level reuses the same clean clouds, estimator seeds and noise
/// seeds, so the `σ = 0` row reproduces [`run_suite`] exactly.
pub fn noise_sweep(
    specs: &[ManifoldSpec],
    methods: &[Method],
    sigmas: &[f64],
    replicates: usize,
    base_seed: u64,
    settings: &EstimatorSettings,
) -> Result<Vec<NoiseRow>> {
    if sigmas.is_empty() {
        return Err(Error::Config("no noise levels given".into()));
    }
    if let Some(bad) = sigmas.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return Err(Error::Config(format!("noise sigma must be ≥ 0, got {bad}")));
    }
    let mut rows = Vec::with_capacity(sigmas.len() * methods.len());
    for &sigma in sigmas {
        let run = run_cases(specs, methods, replicates, base_seed, settings, |c, s, r| {
            add_noise(c, sigma, noise_seed(base_seed, s, r))
        })?;
        for &method in methods {
            rows.push(NoiseRow { sigma, method, mpe: mpe(&run, method)? });
        }
    }
    Ok(rows)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                out[k] = avg;
            }
            i = j + 1;
        }
        out
    }
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}
