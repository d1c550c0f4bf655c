//! Intrinsic dimension estimation for point clouds.
//!
//! Three estimators share one report format:
//!
//! * [`estimators::mle`]: the Levina–Bickel maximum-likelihood estimate from
//!   nearest-neighbor distance ratios, at fixed `k` or fixed radius.
//! * [`estimators::geomle`]: GeoMLE, which bootstraps the MLE over a range of
//!   neighborhood sizes and extrapolates it to zero radius with a weighted
//!   polynomial regression, removing the bias from curvature and nonuniform
//!   density.
//! * [`estimators::pca`]: a global PCA explained-variance baseline.
//!
//! [`manifolds`] generates the synthetic benchmark manifolds and [`bench`] runs
//! suites of them, scoring methods by mean percentage error and Dolan–More
//! performance profiles.
//!
//! ```
//! use idest::{generate, geomle_dataset, mle_dataset, GeoMleConfig, ManifoldKind, ManifoldSpec, MleConfig};
//!
//! let data = generate(&ManifoldSpec::new(ManifoldKind::SwissRoll, 2, 3, 400, 7)).unwrap();
//! let mle = mle_dataset(&data.cloud, &MleConfig::default()).unwrap();
//! assert!((mle.global_estimate - 2.0).abs() < 0.5);
//!
//! let cfg = GeoMleConfig { bootstrap_count: 5, ..GeoMleConfig::default() };
//! let geo = geomle_dataset(&data.cloud, &cfg).unwrap();
//! assert_eq!(geo.per_point.len() + geo.failed.len(), 400);
//! assert!(geo.global_estimate.is_finite());
//! ```

pub mod bench;
pub mod cloud;
pub mod config;
pub mod error;
pub mod estimators;
pub mod io;
pub mod manifolds;
pub mod neighbors;
pub mod regression;
pub mod report;
pub mod rng;

pub use cloud::PointCloud;
pub use config::{validate_config, Aggregation, GeoMleConfig, MleConfig, PcaConfig};
pub use error::{Error, Result};
pub use estimators::{geomle_dataset, geomle_point, mle_dataset, pca_estimate, EstimatorSettings};
pub use manifolds::{add_noise, generate, LabeledCloud, ManifoldKind, ManifoldSpec};
pub use neighbors::{count_within_radius, knn, NeighborTable};
pub use regression::{solve_wls, WlsProblem, WlsSolution};
pub use report::{EstimateReport, KStat, Method, PointDiagnostics};
