//! The immutable point cloud every estimator consumes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` points in `p`-dimensional ambient space, stored row-major.
///
/// Construction enforces `n >= 2`, `p >= 1` and finite coordinates; the cloud
/// cannot be mutated afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    n: usize,
    p: usize,
    data: Vec<f64>,
    label: Option<String>,
}

impl PointCloud {
    /// Builds a cloud from a flat row-major buffer of `n * p` coordinates.
    pub fn from_flat(n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCloud(format!("need at least 2 points, got {n}")));
        }
        if p < 1 {
            return Err(Error::InvalidCloud("ambient dimension must be at least 1".into()));
        }
        if data.len() != n * p {
            return Err(Error::InvalidCloud(format!(
                "buffer holds {} values, expected {n} x {p}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCloud(format!(
                "non-finite coordinate at row {}, column {}",
                pos / p,
                pos % p
            )));
        }
        Ok(Self { n, p, data, label: None })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::InvalidCloud(format!(
                "row {i} has {} columns, expected {p}",
                rows[i].len()
            )));
        }
        Self::from_flat(rows.len(), p, rows.concat())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a valid cloud holds at least two points.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.p)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Applies `f` to every point, producing a new cloud of ambient dimension `p_out`.
    pub fn map_points<F>(&self, p_out: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let mut out = vec![0.0; self.n * p_out];
        for (src, dst) in self.points().zip(out.chunks_exact_mut(p_out)) {
            f(src, dst);
        }
        let mut cloud = Self::from_flat(self.n, p_out, out)?;
        cloud.label = self.label.clone();
        Ok(cloud)
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.p, &self.data)
    }
}

/// Euclidean distance, computed as the square root of summed squared differences.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_too_few_points() {
        assert!(matches!(
            PointCloud::from_flat(1, 2, vec![0.0, 1.0]),
            Err(Error::InvalidCloud(_))
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let err = PointCloud::from_flat(2, 2, vec![0.0, 1.0, f64::NAN, 0.0]).unwrap_err();
        assert!(err.to_string().contains("row 1, column 0"));
        assert!(PointCloud::from_flat(2, 1, vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(PointCloud::from_rows(&[vec![0.0, 1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn row_access() {
        let c = PointCloud::from_rows(&[vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, 5.0]]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.point(2), &[4.0, 5.0]);
        assert_eq!(euclidean(c.point(0), c.point(1)), 8f64.sqrt());
    }
}
