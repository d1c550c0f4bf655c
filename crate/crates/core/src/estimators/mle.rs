//! Levina–Bickel maximum-likelihood estimates from nearest-neighbor distances.
//!
//! With `T_1 ≤ … ≤ T_k` the distances from `x` to its nearest sample points,
//!
//! ```text
//! m̂_k(x) = ( 1/(k−1) · Σ_{j<k} log(T_k / T_j) )⁻¹
//! m̂_R(x) = ( 1/N(R,x) · Σ_{j≤N} log(R / T_j) )⁻¹
//! ```
//!
//! Distances below `duplicate_epsilon · T_k` (or `· R`) are raised to that value
//! before taking logs so exact duplicates contribute a large but finite term.

use rayon::prelude::*;

use crate::cloud::{euclidean, PointCloud};
use crate::config::{Aggregation, MleConfig};
use crate::error::{Error, Result};
use crate::neighbors::knn_in_cloud;
use crate::report::{EstimateReport, KStat, Method, PointDiagnostics, PointFailure, ReportConfig};

/// Fixed-k estimate from a sorted distance row holding at least `k` entries.
pub fn mle_fixed_k(row: &[f64], k: usize, duplicate_epsilon: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Config("k ≥ 2".into()));
    }
    if row.len() < k {
        return Err(Error::KTooLarge { k, available: row.len() });
    }
    let t_k = row[k - 1];
    if !(t_k > 0.0 && t_k.is_finite()) {
        return Err(Error::DegenerateNeighborhood(format!("T_{k} = {t_k}")));
    }
    let floor = duplicate_epsilon * t_k;
    let sum: f64 = row[..k - 1].iter().map(|&t| (t_k / t.max(floor)).ln()).sum();
    if !(sum > 0.0) {
        return Err(Error::DegenerateNeighborhood(format!("all {k} neighbors equidistant")));
    }
    Ok((k - 1) as f64 / sum)
}

/// Fixed-radius estimate at `x`, skipping sample `exclude`.
pub fn mle_fixed_radius(
    cloud: &PointCloud,
    x: &[f64],
    radius: f64,
    exclude: Option<usize>,
    duplicate_epsilon: f64,
) -> Result<f64> {
    if x.len() != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: cloud.dim(), got: x.len() });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Config(format!("radius must be positive, got {radius}")));
    }
    let inside: Vec<f64> = cloud
        .points()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(_, p)| euclidean(x, p))
        .filter(|&d| d <= radius)
        .collect();
    mle_radius_from_distances(&inside, radius, duplicate_epsilon)
}

/// Fixed-radius estimate from the distances already known to lie within `radius`.
pub fn mle_radius_from_distances(inside: &[f64], radius: f64, duplicate_epsilon: f64) -> Result<f64> {
    if inside.is_empty() {
        return Err(Error::EmptyBall(radius));
    }
    let floor = duplicate_epsilon * radius;
    let sum: f64 = inside.iter().map(|&t| (radius / t.max(floor)).ln()).sum();
    if !(sum > 0.0) {
        return Err(Error::DegenerateNeighborhood(format!("every neighbor sits on the boundary R = {radius}")));
    }
    Ok(inside.len() as f64 / sum)
}

/// Fixed-k MLE at every sample point, pooled per `cfg.aggregation`.
///
/// Points with degenerate neighborhoods are left out of the pool and listed in
/// `failed`.
pub fn mle_dataset(cloud: &PointCloud, cfg: &MleConfig) -> Result<EstimateReport> {
    cfg.validate_for(cloud)?;
    let k = cfg.k;
    let table = knn_in_cloud(cloud, k)?;
    let outcomes: Vec<Result<PointDiagnostics>> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let row = table.distances(i);
            let estimate = mle_fixed_k(row, k, cfg.duplicate_epsilon)?;
            Ok(PointDiagnostics {
                point_index: i,
                local_estimate: estimate,
                per_k: vec![KStat { k, mean_radius: row[k - 1], mean_estimate: estimate, variance: 0.0 }],
                eta: Vec::new(),
                dropped_cells: 0,
            })
        })
        .collect();

    let mut per_point = Vec::new();
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
    let count = per_point.len() as f64;
    let global_estimate = match cfg.aggregation {
        Aggregation::Mean => per_point.iter().map(|d| d.local_estimate).sum::<f64>() / count,
        Aggregation::InverseMean => count / per_point.iter().map(|d| d.local_estimate.recip()).sum::<f64>(),
    };
    Ok(EstimateReport { method: Method::Mle, global_estimate, config: ReportConfig::Mle(*cfg), per_point, failed })
}
