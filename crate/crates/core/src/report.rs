//! Estimation reports and their JSON form.

use serde::{Deserialize, Serialize};

use crate::config::{GeoMleConfig, MleConfig, PcaConfig};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "MLE")]
    Mle,
    #[serde(rename = "GeoMLE")]
    GeoMle,
    #[serde(rename = "PCA")]
    Pca,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Mle, Method::GeoMle, Method::Pca];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mle => "MLE",
            Method::GeoMle => "GeoMLE",
            Method::Pca => "PCA",
        }
    }

    /// Parses the case-insensitive method name (`mle`, `geomle`, `pca`).
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mle" => Some(Method::Mle),
            "geomle" => Some(Method::GeoMle),
            "pca" => Some(Method::Pca),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Bootstrap summary for one neighborhood size: `k`, mean radius T̄_k, mean
/// local MLE m̄_k, and the population variance σ̂²_k of that MLE.
///
/// Serialized as the array `[k, Tbar, mbar, var]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, f64, f64, f64)", into = "(usize, f64, f64, f64)")]
pub struct KStat {
    pub k: usize,
    pub mean_radius: f64,
    pub mean_estimate: f64,
    pub variance: f64,
}

impl From<(usize, f64, f64, f64)> for KStat {
    fn from((k, mean_radius, mean_estimate, variance): (usize, f64, f64, f64)) -> Self {
        Self { k, mean_radius, mean_estimate, variance }
    }
}

impl From<KStat> for (usize, f64, f64, f64) {
    fn from(s: KStat) -> Self {
        (s.k, s.mean_radius, s.mean_estimate, s.variance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    #[serde(rename = "index")]
    pub point_index: usize,
    #[serde(rename = "estimate")]
    pub local_estimate: f64,
    pub per_k: Vec<KStat>,
    /// Polynomial coefficients of degree 1..=ℓ (GeoMLE only).
    pub eta: Vec<f64>,
    /// Bootstrap (replicate, k) cells discarded as degenerate.
    #[serde(default)]
    pub dropped_cells: usize,
}

/// A point whose local estimate could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReportConfig {
    #[serde(rename = "mle")]
    Mle(MleConfig),
    #[serde(rename = "geomle")]
    GeoMle(GeoMleConfig),
    #[serde(rename = "pca")]
    Pca(PcaConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: Method,
    pub global_estimate: f64,
    pub config: ReportConfig,
    pub per_point: Vec<PointDiagnostics>,
    #[serde(default)]
    pub failed: Vec<PointFailure>,
}

impl EstimateReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Local estimates in point order.
    pub fn local_estimates(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_point.iter().map(|d| d.local_estimate)
    }
}

/// Rounds half away from zero, the presentation rule for integer dimensions.
pub fn round_dimension(x: f64) -> i64 {
    x.round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(values: &[f64]) -> EstimateReport {
        EstimateReport {
            method: Method::GeoMle,
            global_estimate: values.iter().sum::<f64>() / values.len() as f64,
            config: ReportConfig::GeoMle(GeoMleConfig::default()),
            per_point: values
                .iter()
                .enumerate()
                .map(|(i, &v)| PointDiagnostics {
                    point_index: i,
                    local_estimate: v,
                    per_k: vec![KStat { k: 10, mean_radius: v.abs() * 0.1, mean_estimate: v, variance: v * v }],
                    eta: vec![v / 3.0, -v / 7.0],
                    dropped_cells: 0,
                })
                .collect(),
            failed: vec![PointFailure { index: 99, reason: "rank deficient".into() }],
        }
    }

    #[test]
    fn json_layout() {
        let json: serde_json::Value = serde_json::from_str(&sample(&[1.5]).to_json().unwrap()).unwrap();
        assert_eq!(json["method"], "GeoMLE");
        assert_eq!(json["per_point"][0]["index"], 0);
        assert_eq!(json["per_point"][0]["per_k"][0][0], 10);
        assert_eq!(json["per_point"][0]["eta"].as_array().unwrap().len(), 2);
        assert_eq!(json["config"]["geomle"]["k1"], 10);
    }

    #[test]
    fn round_half_away_from_zero() {
        assert_eq!(round_dimension(2.5), 3);
        assert_eq!(round_dimension(-2.5), -3);
        assert_eq!(round_dimension(9.49), 9);
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(values in proptest::collection::vec(-1e6f64..1e6, 1..8)) {
            let report = sample(&values);
            let back = EstimateReport::from_json(&report.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, report);
        }
    }
}
