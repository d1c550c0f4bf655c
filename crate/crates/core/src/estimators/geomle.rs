//! Geometry-aware MLE.
//!
//! For a point `x`, `M` bootstrap replicates of the sample are drawn. In each
//! replicate the fixed-k MLE and the radius `T_k` are computed for every
//! `k ∈ [k1, k2]`. Averaging over replicates gives `(T̄_k, m̄_k)` pairs with
//! bootstrap variances `σ̂²_k`, and the weighted regression
//!
//! ```text
//! min Σ_k (1/σ̂²_k) · ( m̄_k − m̆ − η₁ T̄_k − … − η_ℓ T̄_k^ℓ )²
//! ```
//!
//! extrapolates the estimate to zero radius. The intercept `m̆(x)` is the local
//! dimension; the dataset estimate is the mean of `m̆(Xᵢ)`.

use rand::Rng;
use rayon::prelude::*;

use crate::cloud::PointCloud;
use crate::config::GeoMleConfig;
use crate::error::{Error, Result};
use crate::estimators::mle::mle_fixed_k;
use crate::neighbors::sorted_neighbors;
use crate::regression::{fit, WlsSolution};
use crate::report::{EstimateReport, KStat, Method, PointDiagnostics, PointFailure, ReportConfig};
use crate::rng::{substream, StreamRng};

/// Sorted neighbor distances of a query inside bootstrap replicates.
///
/// Built once per query from the full sorted neighbor list; each replicate is
/// then a multiset of sample indices, and its k-NN distances are read off by
/// walking the sorted list with the replicate's multiplicities.
pub struct BootstrapNeighbors {
    sorted: Vec<(f64, usize)>,
    rank_of: Vec<usize>,
    self_index: Option<usize>,
    counts: Vec<u32>,
}

const NOT_A_CANDIDATE: usize = usize::MAX;

impl BootstrapNeighbors {
    pub fn new(cloud: &PointCloud, x: &[f64], self_index: Option<usize>) -> Result<Self> {
        let sorted = sorted_neighbors(cloud, x, self_index)?;
        let mut rank_of = vec![NOT_A_CANDIDATE; cloud.len()];
        for (rank, &(_, idx)) in sorted.iter().enumerate() {
            rank_of[idx] = rank;
        }
        let counts = vec![0; sorted.len()];
        Ok(Self { sorted, rank_of, self_index, counts })
    }

    /// Distances `T_1..T_k` (at most `k_max`) of the replicate whose draws are
    /// `draws`. Draws of the query's own index are dropped.
    pub fn replicate_row(&mut self, draws: impl IntoIterator<Item = usize>, k_max: usize) -> Vec<f64> {
        self.counts.iter_mut().for_each(|c| *c = 0);
        for idx in draws {
            let rank = self.rank_of[idx];
            if rank != NOT_A_CANDIDATE {
                self.counts[rank] += 1;
            }
        }
        let mut row = Vec::with_capacity(k_max);
        for (rank, &count) in self.counts.iter().enumerate() {
            let d = self.sorted[rank].0;
            for _ in 0..count {
                if row.len() == k_max {
                    return row;
                }
                row.push(d);
            }
        }
        row
    }

    /// Draws one bootstrap replicate of size `n` and returns its neighbor row.
    pub fn sample_row(&mut self, n: usize, k_max: usize, rng: &mut StreamRng) -> Vec<f64> {
        let draws: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        self.replicate_row(draws, k_max)
    }

    pub fn self_index(&self) -> Option<usize> {
        self.self_index
    }
}

/// Averages per-replicate radii and MLEs for every `k ∈ [k1, k2]`.
///
/// A (replicate, k) cell whose MLE is degenerate, or whose replicate has fewer
/// than `k` neighbors, is dropped and the averages use the remaining cells.
/// Returns the surviving per-k summaries and the number of dropped cells.
pub fn summarize_replicates(rows: &[Vec<f64>], k1: usize, k2: usize, duplicate_epsilon: f64) -> (Vec<KStat>, usize) {
    let mut stats = Vec::with_capacity(k2 + 1 - k1);
    let mut dropped = 0;
    let mut radii = Vec::with_capacity(rows.len());
    let mut estimates = Vec::with_capacity(rows.len());
    for k in k1..=k2 {
        radii.clear();
        estimates.clear();
        for row in rows {
            match mle_fixed_k(row, k, duplicate_epsilon) {
                Ok(m) => {
                    radii.push(row[k - 1]);
                    estimates.push(m);
                }
                Err(_) => dropped += 1,
            }
        }
        if estimates.is_empty() {
            continue;
        }
        let count = estimates.len() as f64;
        let mean_radius = radii.iter().sum::<f64>() / count;
        let mean_estimate = estimates.iter().sum::<f64>() / count;
        let variance = estimates.iter().map(|m| (m - mean_estimate).powi(2)).sum::<f64>() / count;
        stats.push(KStat { k, mean_radius, mean_estimate, variance });
    }
    (stats, dropped)
}

/// Weighted polynomial fit of `m̄_k` against `T̄_k` with weights `1/max(σ̂²_k, floor)`.
///
/// `degree == 0` reduces to the weighted mean of the `m̄_k`.
pub fn fit_local(stats: &[KStat], degree: usize, variance_floor: f64) -> Result<WlsSolution> {
    if stats.len() < degree + 2 {
        return Err(Error::RankDeficient(format!(
            "{} neighborhood sizes survived, degree {degree} needs {}",
            stats.len(),
            degree + 2
        )));
    }
    let xs: Vec<f64> = stats.iter().map(|s| s.mean_radius).collect();
    let ys: Vec<f64> = stats.iter().map(|s| s.mean_estimate).collect();
    let weights: Vec<f64> = stats.iter().map(|s| s.variance.max(variance_floor).recip()).collect();
    if degree > 0 && xs.iter().all(|&x| x == xs[0]) {
        return Err(Error::RankDeficient("all mean radii coincide".into()));
    }
    fit(&xs, &ys, &weights, degree)
}

/// Local GeoMLE estimate at `x`.
///
/// `self_index` names the sample that `x` is, if any; it is removed from every
/// replicate. The diagnostics' `point_index` is `self_index`, or `cloud.len()`
/// for a query outside the cloud.
pub fn geomle_point(
    cloud: &PointCloud,
    x: &[f64],
    self_index: Option<usize>,
    cfg: &GeoMleConfig,
    rng: &mut StreamRng,
) -> Result<PointDiagnostics> {
    cfg.validate_for(cloud)?;
    let mut neighbors = BootstrapNeighbors::new(cloud, x, self_index)?;
    let rows: Vec<Vec<f64>> = (0..cfg.bootstrap_count)
        .map(|_| neighbors.sample_row(cloud.len(), cfg.k2, rng))
        .collect();
    let point_index = self_index.unwrap_or(cloud.len());
    diagnostics_from_rows(point_index, &rows, cfg)
}

/// Summary and regression stages of [`geomle_point`] on precomputed replicate rows.
pub fn diagnostics_from_rows(point_index: usize, rows: &[Vec<f64>], cfg: &GeoMleConfig) -> Result<PointDiagnostics> {
    let (per_k, dropped_cells) = summarize_replicates(rows, cfg.k1, cfg.k2, cfg.duplicate_epsilon);
    let solution = fit_local(&per_k, cfg.degree, cfg.variance_floor)?;
    Ok(PointDiagnostics {
        point_index,
        local_estimate: solution.intercept,
        per_k,
        eta: solution.eta,
        dropped_cells,
    })
}

/// GeoMLE at every sample point; point `i` draws from substream `i` of `cfg.seed`.
pub fn geomle_dataset(cloud: &PointCloud, cfg: &GeoMleConfig) -> Result<EstimateReport> {
    cfg.validate_for(cloud)?;
    let outcomes: Vec<Result<PointDiagnostics>> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, i as u64);
            geomle_point(cloud, cloud.point(i), Some(i), cfg, &mut rng)
        })
        .collect();

    let mut per_point = Vec::with_capacity(cloud.len());
    let mut failed = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(d) => per_point.push(d),
            Err(e) => failed.push(PointFailure { index, reason: e.to_string() }),
        }
    }
    if per_point.is_empty() {
        return Err(Error::AllPointsFailed { failed: failed.len() });
    }
    let global_estimate = per_point.iter().map(|d| d.local_estimate).sum::<f64>() / per_point.len() as f64;
    Ok(EstimateReport {
        method: Method::GeoMle,
        global_estimate,
        config: ReportConfig::GeoMle(*cfg),
        per_point,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::nearest;

    fn small_cfg() -> GeoMleConfig {
        GeoMleConfig { k1: 3, k2: 8, bootstrap_count: 5, degree: 2, seed: 11, ..GeoMleConfig::default() }
    }

    fn grid_cloud() -> PointCloud {
        let mut data = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                data.push(i as f64 + 0.01 * j as f64 * i as f64);
                data.push(j as f64 * 1.3 + 0.02 * (i * i) as f64);
            }
        }
        PointCloud::from_flat(30, 2, data).unwrap()
    }

    #[test]
    fn replicate_row_matches_explicit_replicate_knn() {
        let cloud = grid_cloud();
        let me = 7;
        let mut bn = BootstrapNeighbors::new(&cloud, cloud.point(me), Some(me)).unwrap();
        let mut rng = substream(3, 0);
        for _ in 0..20 {
            let draws: Vec<usize> = (0..cloud.len()).map(|_| rng.random_range(0..cloud.len())).collect();
            let row = bn.replicate_row(draws.iter().copied(), 8);
            // Explicit replicate: materialize the drawn points, minus the query itself.
            let kept: Vec<Vec<f64>> = draws.iter().filter(|&&d| d != me).map(|&d| cloud.point(d).to_vec()).collect();
            let replicate = PointCloud::from_rows(&kept).unwrap();
            let brute: Vec<f64> = nearest(&replicate, cloud.point(me), 8, None).unwrap().into_iter().map(|(d, _)| d).collect();
            assert_eq!(row, brute);
        }
    }

    #[test]
    fn self_draws_are_removed() {
        let cloud = grid_cloud();
        let mut bn = BootstrapNeighbors::new(&cloud, cloud.point(0), Some(0)).unwrap();
        let row = bn.replicate_row([0, 0, 0, 1, 1], 5);
        let d01 = crate::cloud::euclidean(cloud.point(0), cloud.point(1));
        assert_eq!(row, vec![d01, d01]);
    }

    #[test]
    fn population_variance_divides_by_replicate_count() {
        let rows = vec![vec![1.0, 2.0, 4.0], vec![1.0, 3.0, 4.0]];
        let (stats, dropped) = summarize_replicates(&rows, 3, 3, 1e-12);
        assert_eq!(dropped, 0);
        let m1 = 2.0 / ((4.0f64).ln() + 2.0f64.ln());
        let m2 = 2.0 / ((4.0f64).ln() + (4.0f64 / 3.0).ln());
        let mean = 0.5 * (m1 + m2);
        assert!((stats[0].mean_estimate - mean).abs() < 1e-15);
        assert!((stats[0].variance - 0.5 * ((m1 - mean).powi(2) + (m2 - mean).powi(2))).abs() < 1e-15);
        assert_eq!(stats[0].mean_radius, 4.0);
    }

    #[test]
    fn degenerate_cells_are_dropped_and_counted() {
        let rows = vec![vec![1.0, 1.0, 1.0, 2.0], vec![1.0, 2.0, 3.0, 4.0]];
        let (stats, dropped) = summarize_replicates(&rows, 2, 4, 1e-12);
        // Replicate 0 is flat for k = 2 and 3.
        assert_eq!(dropped, 2);
        assert_eq!(stats.len(), 3);
        assert_eq!(stats[0].mean_radius, 2.0);
        assert_eq!(stats[0].variance, 0.0);
        assert_eq!(stats[2].mean_radius, 3.0);
    }

    #[test]
    fn constant_response_gives_constant_intercept() {
        // One replicate: the sample itself, with a flat MLE profile imposed.
        let stats: Vec<KStat> = (10..=14)
            .map(|k| KStat { k, mean_radius: 0.1 * k as f64, mean_estimate: 3.5, variance: 0.0 })
            .collect();
        let s = fit_local(&stats, 2, 1e-10).unwrap();
        assert!((s.intercept - 3.5).abs() < 1e-12);
        assert!(s.eta.iter().all(|e| e.abs() < 1e-9));
    }

    #[test]
    fn single_unresampled_replicate() {
        let cloud = grid_cloud();
        let cfg = GeoMleConfig { k1: 3, k2: 8, bootstrap_count: 1, degree: 1, ..GeoMleConfig::default() };
        let row: Vec<f64> = nearest(&cloud, cloud.point(4), 8, Some(4)).unwrap().into_iter().map(|(d, _)| d).collect();
        let d = diagnostics_from_rows(4, &[row.clone()], &cfg).unwrap();
        assert!(d.per_k.iter().all(|s| s.variance == 0.0));
        for s in &d.per_k {
            assert_eq!(s.mean_radius, row[s.k - 1]);
            assert_eq!(s.mean_estimate, mle_fixed_k(&row, s.k, cfg.duplicate_epsilon).unwrap());
        }
    }

    #[test]
    fn linear_fit_matches_two_by_two_normal_equations() {
        let stats = [
            KStat { k: 5, mean_radius: 0.8, mean_estimate: 2.9, variance: 0.04 },
            KStat { k: 6, mean_radius: 0.9, mean_estimate: 2.75, variance: 0.01 },
            KStat { k: 7, mean_radius: 1.05, mean_estimate: 2.7, variance: 0.09 },
        ];
        let s = fit_local(&stats, 1, 1e-10).unwrap();
        // Closed form for weighted simple regression.
        let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for st in &stats {
            let w = 1.0 / st.variance;
            sw += w;
            sx += w * st.mean_radius;
            sy += w * st.mean_estimate;
            sxx += w * st.mean_radius * st.mean_radius;
            sxy += w * st.mean_radius * st.mean_estimate;
        }
        let det = sw * sxx - sx * sx;
        let intercept = (sxx * sy - sx * sxy) / det;
        let slope = (sw * sxy - sx * sy) / det;
        assert!((s.intercept - intercept).abs() < 1e-10 * intercept.abs());
        assert!((s.eta[0] - slope).abs() < 1e-10 * slope.abs());
    }

    #[test]
    fn degree_zero_is_variance_weighted_mean() {
        let cloud = grid_cloud();
        let cfg = small_cfg();
        let mut rng = substream(cfg.seed, 9);
        let mut bn = BootstrapNeighbors::new(&cloud, cloud.point(9), Some(9)).unwrap();
        let rows: Vec<Vec<f64>> = (0..cfg.bootstrap_count).map(|_| bn.sample_row(cloud.len(), cfg.k2, &mut rng)).collect();
        let (stats, _) = summarize_replicates(&rows, cfg.k1, cfg.k2, cfg.duplicate_epsilon);
        let s = fit_local(&stats, 0, cfg.variance_floor).unwrap();
        let (num, den) = stats.iter().fold((0.0, 0.0), |(n, d), st| {
            let w = 1.0 / st.variance.max(cfg.variance_floor);
            (n + w * st.mean_estimate, d + w)
        });
        assert!((s.intercept - num / den).abs() < 1e-12 * (num / den).abs());
    }

    #[test]
    fn too_few_surviving_sizes_is_rank_deficient() {
        let stats = [
            KStat { k: 5, mean_radius: 0.8, mean_estimate: 2.9, variance: 0.04 },
            KStat { k: 6, mean_radius: 0.9, mean_estimate: 2.75, variance: 0.01 },
            KStat { k: 7, mean_radius: 1.05, mean_estimate: 2.7, variance: 0.09 },
        ];
        assert!(matches!(fit_local(&stats, 2, 1e-10), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn dataset_is_deterministic() {
        let cloud = grid_cloud();
        let a = geomle_dataset(&cloud, &small_cfg()).unwrap();
        let b = geomle_dataset(&cloud, &small_cfg()).unwrap();
        assert_eq!(a, b);
        let other = geomle_dataset(&cloud, &GeoMleConfig { seed: 12, ..small_cfg() }).unwrap();
        assert_ne!(a.global_estimate, other.global_estimate);
    }

    #[test]
    fn external_query_point() {
        let cloud = grid_cloud();
        let mut rng = substream(1, 0);
        let d = geomle_point(&cloud, &[2.5, 2.5], None, &small_cfg(), &mut rng).unwrap();
        assert_eq!(d.point_index, cloud.len());
        assert!(d.local_estimate.is_finite());
    }
}
