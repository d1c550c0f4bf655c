//! Exact Euclidean k-nearest-neighbor queries.
//!
//! Search is a brute-force scan. Candidates are ordered by `(distance, index)`,
//! so ties always resolve to the lower sample index and results do not depend
//! on evaluation order.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::cloud::{euclidean, PointCloud};
use crate::error::{Error, Result};

/// Sorted neighbor distances and indices for a batch of queries.
///
/// `distance(i, j)` is `T_{j+1}` of query `i`: the distance to its `(j+1)`-th
/// nearest sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    query_count: usize,
    k_max: usize,
    distances: Vec<f64>,
    indices: Vec<usize>,
}

impl NeighborTable {
    pub fn query_count(&self) -> usize {
        self.query_count
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn distances(&self, query: usize) -> &[f64] {
        &self.distances[query * self.k_max..(query + 1) * self.k_max]
    }

    pub fn indices(&self, query: usize) -> &[usize] {
        &self.indices[query * self.k_max..(query + 1) * self.k_max]
    }

    pub fn distance(&self, query: usize, j: usize) -> f64 {
        self.distances[query * self.k_max + j]
    }
}

#[inline]
fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

fn check_dim(cloud: &PointCloud, got: usize) -> Result<()> {
    if cloud.dim() != got {
        return Err(Error::DimensionMismatch { expected: cloud.dim(), got });
    }
    Ok(())
}

/// All sample points except `exclude`, as `(distance, index)` sorted ascending.
pub fn sorted_neighbors(cloud: &PointCloud, x: &[f64], exclude: Option<usize>) -> Result<Vec<(f64, usize)>> {
    check_dim(cloud, x.len())?;
    let mut all: Vec<(f64, usize)> = cloud
        .points()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(i, p)| (euclidean(x, p), i))
        .collect();
    all.sort_unstable_by(by_distance_then_index);
    Ok(all)
}

/// The `k` nearest sample points to `x`, skipping sample `exclude`.
pub fn nearest(cloud: &PointCloud, x: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<(f64, usize)>> {
    check_dim(cloud, x.len())?;
    let available = cloud.len() - usize::from(exclude.is_some_and(|e| e < cloud.len()));
    if k == 0 || k > available {
        return Err(Error::KTooLarge { k, available });
    }
    let mut all: Vec<(f64, usize)> = cloud
        .points()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(i, p)| (euclidean(x, p), i))
        .collect();
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_index);
    Ok(all)
}

/// Exact k-NN of every query point against `cloud`.
///
/// With `exclude_self`, query `i` is taken to be sample `i` of `cloud` and that
/// index is removed from its candidates. Exact duplicates at other indices stay
/// in as zero-distance neighbors.
pub fn knn(cloud: &PointCloud, queries: &PointCloud, k: usize, exclude_self: bool) -> Result<NeighborTable> {
    check_dim(cloud, queries.dim())?;
    if exclude_self && queries.len() != cloud.len() {
        return Err(Error::InvalidCloud(
            "self-exclusion requires the queries to be the cloud itself".into(),
        ));
    }
    let available = cloud.len() - usize::from(exclude_self);
    if k == 0 || k > available {
        return Err(Error::KTooLarge { k, available });
    }
    let rows: Vec<Vec<(f64, usize)>> = (0..queries.len())
        .into_par_iter()
        .map(|i| nearest(cloud, queries.point(i), k, exclude_self.then_some(i)))
        .collect::<Result<_>>()?;
    let mut distances = Vec::with_capacity(rows.len() * k);
    let mut indices = Vec::with_capacity(rows.len() * k);
    for row in rows {
        for (d, i) in row {
            distances.push(d);
            indices.push(i);
        }
    }
    Ok(NeighborTable { query_count: queries.len(), k_max: k, distances, indices })
}

/// k-NN of every cloud point among the others.
pub fn knn_in_cloud(cloud: &PointCloud, k: usize) -> Result<NeighborTable> {
    knn(cloud, cloud, k, true)
}

/// N(R, x): sample points within distance `radius` of `x`, excluding sample `exclude`.
pub fn count_within_radius(cloud: &PointCloud, x: &[f64], radius: f64, exclude: Option<usize>) -> Result<usize> {
    check_dim(cloud, x.len())?;
    Ok(cloud
        .points()
        .enumerate()
        .filter(|&(i, p)| Some(i) != exclude && euclidean(x, p) <= radius)
        .count())
}
