//! Global PCA baseline.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cloud::PointCloud;
use crate::config::PcaConfig;
use crate::error::{Error, Result};
use crate::report::{EstimateReport, Method, ReportConfig};

/// Eigenvalues of the sample covariance, largest first, negatives clipped to zero.
pub fn covariance_spectrum(cloud: &PointCloud) -> Result<Vec<f64>> {
    let first = cloud.point(0);
    if cloud.points().all(|p| p == first) {
        return Err(Error::ZeroVariance);
    }
    let (n, p) = (cloud.len(), cloud.dim());
    let mut centered = cloud.to_matrix();
    for j in 0..p {
        let mean = centered.column(j).sum() / n as f64;
        centered.column_mut(j).add_scalar_mut(-mean);
    }
    // The smaller Gram matrix shares the nonzero spectrum.
    let gram: DMatrix<f64> = if p <= n {
        centered.transpose() * &centered
    } else {
        &centered * centered.transpose()
    };
    let scale = 1.0 / (n - 1) as f64;
    let mut eig: Vec<f64> = SymmetricEigen::new(gram * scale).eigenvalues.iter().map(|v| v.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig.truncate(p.min(n));
    Ok(eig)
}

/// Smallest `d` whose top-`d` covariance eigenvalues hold at least the
/// configured fraction of total variance.
pub fn pca_estimate(cloud: &PointCloud, cfg: &PcaConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let spectrum = covariance_spectrum(cloud)?;
    let total: f64 = spectrum.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let target = cfg.explained_variance_threshold * total;
    let mut acc = 0.0;
    let mut d = spectrum.len();
    for (i, v) in spectrum.iter().enumerate() {
        acc += v;
        if acc >= target {
            d = i + 1;
            break;
        }
    }
    Ok(EstimateReport {
        method: Method::Pca,
        global_estimate: d as f64,
        config: ReportConfig::Pca(*cfg),
        per_point: Vec::new(),
        failed: Vec::new(),
    })
}
