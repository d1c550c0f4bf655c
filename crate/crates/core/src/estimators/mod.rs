//! Dimension estimators: Levina–Bickel MLE, GeoMLE and the PCA baseline.

pub mod geomle;
pub mod mle;
pub mod pca;

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::config::{GeoMleConfig, MleConfig, PcaConfig};
use crate::error::Result;
use crate::report::{EstimateReport, Method};

pub use geomle::{geomle_dataset, geomle_point};
pub use mle::{mle_dataset, mle_fixed_k, mle_fixed_radius};
pub use pca::pca_estimate;

/// Configuration for every method, so callers can pick one at run time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    pub mle: MleConfig,
    pub geomle: GeoMleConfig,
    pub pca: PcaConfig,
}

impl EstimatorSettings {
    pub fn estimate(&self, cloud: &PointCloud, method: Method) -> Result<EstimateReport> {
        match method {
            Method::Mle => mle_dataset(cloud, &self.mle),
            Method::GeoMle => geomle_dataset(cloud, &self.geomle),
            Method::Pca => pca_estimate(cloud, &self.pca),
        }
    }
}
