//! Estimator configuration and its validation.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};

/// Parameters of the bootstrap-and-regress GeoMLE estimator.
///
/// Neighborhood sizes `k1..=k2` are regressed against their averaged radii with a
/// polynomial of `degree` (no constant term) plus the intercept that becomes the
/// local dimension estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoMleConfig {
    pub k1: usize,
    pub k2: usize,
    pub bootstrap_count: usize,
    pub degree: usize,
    pub seed: u64,
    pub variance_floor: f64,
    pub duplicate_epsilon: f64,
}

impl Default for GeoMleConfig {
    fn default() -> Self {
        Self {
            k1: 10,
            k2: 40,
            bootstrap_count: 20,
            degree: 2,
            seed: 0,
            variance_floor: 1e-10,
            duplicate_epsilon: 1e-12,
        }
    }
}

impl GeoMleConfig {
    /// Checks every constraint that does not depend on the cloud.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.k1 < 2 {
            return fail("k1 ≥ 2");
        }
        if self.k1 > self.k2 {
            return fail("k1 ≤ k2");
        }
        if self.degree < 1 {
            return fail("degree ℓ ≥ 1");
        }
        if self.k2 - self.k1 + 1 < self.degree + 2 {
            return fail("k2−k1+1 ≥ ℓ+2");
        }
        if self.bootstrap_count < 1 {
            return fail("M ≥ 1");
        }
        if !(self.variance_floor > 0.0 && self.variance_floor.is_finite()) {
            return fail("variance_floor > 0");
        }
        if !(self.duplicate_epsilon > 0.0 && self.duplicate_epsilon.is_finite()) {
            return fail("duplicate_epsilon > 0");
        }
        Ok(())
    }

    /// Full validation against a concrete cloud (adds `k2 < n`).
    pub fn validate_for(&self, cloud: &PointCloud) -> Result<()> {
        self.validate()?;
        if self.k2 >= cloud.len() {
            return Err(Error::Config(format!("k2 < n (k2 = {}, n = {})", self.k2, cloud.len())));
        }
        Ok(())
    }
}

/// Free-function form of [`GeoMleConfig::validate_for`].
pub fn validate_config(cfg: &GeoMleConfig, cloud: &PointCloud) -> Result<()> {
    cfg.validate_for(cloud)
}

/// How per-point MLE estimates are pooled into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Arithmetic mean of the local estimates.
    #[default]
    Mean,
    /// Inverse of the mean of inverse local estimates.
    InverseMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleConfig {
    pub k: usize,
    pub aggregation: Aggregation,
    pub duplicate_epsilon: f64,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self { k: 20, aggregation: Aggregation::Mean, duplicate_epsilon: 1e-12 }
    }
}

impl MleConfig {
    pub fn validate_for(&self, cloud: &PointCloud) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config("k ≥ 2".into()));
        }
        if self.k >= cloud.len() {
            return Err(Error::Config(format!("k < n (k = {}, n = {})", self.k, cloud.len())));
        }
        if !(self.duplicate_epsilon > 0.0 && self.duplicate_epsilon.is_finite()) {
            return Err(Error::Config("duplicate_epsilon > 0".into()));
        }
        Ok(())
    }
}

/// Global PCA baseline: the smallest number of principal directions explaining
/// at least `explained_variance_threshold` of the total variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcaConfig {
    pub explained_variance_threshold: f64,
}

impl Default for PcaConfig {
    fn default() -> Self {
        Self { explained_variance_threshold: 0.99 }
    }
}

impl PcaConfig {
    pub fn validate(&self) -> Result<()> {
        let t = self.explained_variance_threshold;
        if t > 0.0 && t < 1.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("explained variance threshold in (0, 1), got {t}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(n: usize) -> PointCloud {
        PointCloud::from_flat(n, 1, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    fn cfg(k1: usize, k2: usize, degree: usize) -> GeoMleConfig {
        GeoMleConfig { k1, k2, degree, ..GeoMleConfig::default() }
    }

    #[test]
    fn defaults_are_valid_at_n_1000() {
        validate_config(&GeoMleConfig::default(), &cloud(1000)).unwrap();
        validate_config(&cfg(10, 40, 2), &cloud(1000)).unwrap();
    }

    #[test]
    fn names_first_violated_constraint() {
        let err = validate_config(&cfg(10, 9, 2), &cloud(1000)).unwrap_err();
        assert_eq!(err, Error::Config("k1 ≤ k2".into()));
        let err = validate_config(&cfg(10, 11, 2), &cloud(1000)).unwrap_err();
        assert_eq!(err, Error::Config("k2−k1+1 ≥ ℓ+2".into()));
        let err = validate_config(&cfg(1, 11, 2), &cloud(1000)).unwrap_err();
        assert_eq!(err, Error::Config("k1 ≥ 2".into()));
    }

    #[test]
    fn k2_must_be_below_n() {
        let err = validate_config(&cfg(10, 40, 2), &cloud(40)).unwrap_err();
        assert!(err.to_string().contains("k2 < n"));
        validate_config(&cfg(10, 40, 2), &cloud(41)).unwrap();
    }

    #[test]
    fn scalar_constraints() {
        let c = cloud(100);
        let base = GeoMleConfig::default();
        assert!(GeoMleConfig { bootstrap_count: 0, ..base }.validate_for(&c).is_err());
        assert!(GeoMleConfig { variance_floor: 0.0, ..base }.validate_for(&c).is_err());
        assert!(GeoMleConfig { duplicate_epsilon: -1.0, ..base }.validate_for(&c).is_err());
        assert!(GeoMleConfig { degree: 0, ..base }.validate_for(&c).is_err());
    }

    #[test]
    fn pca_threshold_open_interval() {
        assert!(PcaConfig { explained_variance_threshold: 0.0 }.validate().is_err());
        assert!(PcaConfig { explained_variance_threshold: 1.0 }.validate().is_err());
        PcaConfig { explained_variance_threshold: 0.5 }.validate().unwrap();
    }
}
