//! Seeded generators for the synthetic benchmark manifolds.
//!
//! Each generator samples intrinsic parameters, maps them to a coordinate block
//! of some native width `q`, and embeds the block into `ℝᵖ`. When `q < p` the
//! embedding is a random orthonormal `p × q` frame; otherwise the block is used
//! as is. `Norm` pads with zeros instead and `Affine` always applies a full
//! random frame plus offset.
//!
//! | kind | parameters | native block |
//! |---|---|---|
//! | `Affine` | `u ∈ [0,1]^m` | `u` |
//! | `Norm` | `z ~ N(0, I_m)` | `z` |
//! | `Uniform` | `u ∈ [0,1]^m` | `u` |
//! | `Sphere` | `z ~ N(0, I_{m+1})` | `z / ‖z‖` |
//! | `NonuniformSphere` | `u ∈ [-1,1]^m` | `(u, 1) / ‖(u, 1)‖` |
//! | `Helix1D` | `t ∈ [0, 2π)` | `((2+cos 8t) cos t, (2+cos 8t) sin t, sin 8t)` |
//! | `Helix2D` | `r, s ∈ [0, 10π)` | `(r cos s, r sin s, s/2)` |
//! | `SwissRoll` | `t ∈ [3π/2, 9π/2], h ∈ [0, 21]` | `(t cos t, h, t sin t)` |
//! | `Moebius` | `t ∈ [0, 2π), v ∈ [-1, 1]` | `((1+v/2 cos t/2) cos t, (1+v/2 cos t/2) sin t, v/2 sin t/2)` |
//! | `Spiral` | `t ∈ [0, 4π]` | `(t cos t, t sin t, 0)` |
//! | `Paraboloid` | `E_0..E_m ~ Exp(1)`, `x_i = (1 + E_i/E_0)⁻¹`, `y = (x, ‖x‖²)` | `(y, sin y, y²)` |
//! | `Nonlinear` | `u ∈ [0,1]^m`, `j = i+1 mod m` | per `i`: `(cos 2πu_i, sin 2πu_i, u_j cos 2πu_i, u_j sin 2πu_i, u_i², u_i u_j)` |
//! | `CubeSurface` | `u ∈ [0,1]^{m+1}`, one coordinate pinned to 0 or 1 | `u` |

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::rng::{substream, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    Affine,
    Norm,
    Uniform,
    Sphere,
    NonuniformSphere,
    #[serde(rename = "helix1d")]
    Helix1D,
    #[serde(rename = "helix2d")]
    Helix2D,
    #[serde(rename = "swissroll", alias = "roll")]
    SwissRoll,
    Moebius,
    Spiral,
    Paraboloid,
    Nonlinear,
    #[serde(rename = "cubic", alias = "cube_surface")]
    CubeSurface,
}

impl ManifoldKind {
    pub const ALL: [ManifoldKind; 13] = [
        ManifoldKind::Affine,
        ManifoldKind::Norm,
        ManifoldKind::Uniform,
        ManifoldKind::Sphere,
        ManifoldKind::NonuniformSphere,
        ManifoldKind::Helix1D,
        ManifoldKind::Helix2D,
        ManifoldKind::SwissRoll,
        ManifoldKind::Moebius,
        ManifoldKind::Spiral,
        ManifoldKind::Paraboloid,
        ManifoldKind::Nonlinear,
        ManifoldKind::CubeSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ManifoldKind::Affine => "affine",
            ManifoldKind::Norm => "norm",
            ManifoldKind::Uniform => "uniform",
            ManifoldKind::Sphere => "sphere",
            ManifoldKind::NonuniformSphere => "nonuniform_sphere",
            ManifoldKind::Helix1D => "helix1d",
            ManifoldKind::Helix2D => "helix2d",
            ManifoldKind::SwissRoll => "swissroll",
            ManifoldKind::Moebius => "moebius",
            ManifoldKind::Spiral => "spiral",
            ManifoldKind::Paraboloid => "paraboloid",
            ManifoldKind::Nonlinear => "nonlinear",
            ManifoldKind::CubeSurface => "cubic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        match s.as_str() {
            "roll" | "swiss_roll" => Some(ManifoldKind::SwissRoll),
            "cube_surface" | "cubesurface" => Some(ManifoldKind::CubeSurface),
            "nonuniformsphere" => Some(ManifoldKind::NonuniformSphere),
            _ => Self::ALL.into_iter().find(|k| k.name() == s),
        }
    }
}

impl std::fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub kind: ManifoldKind,
    pub m: usize,
    pub p: usize,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ManifoldSpec {
    pub fn new(kind: ManifoldKind, m: usize, p: usize, n: usize, seed: u64) -> Self {
        Self { kind, m, p, n, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Short identifier such as `sphere_10_15`.
    pub fn dataset_name(&self) -> String {
        format!("{}_{}_{}", self.kind, self.m, self.p)
    }

    /// Width of the coordinate block the generator produces before embedding.
    pub fn native_width(&self) -> usize {
        use ManifoldKind::*;
        match self.kind {
            Affine | Norm | Uniform => self.m,
            Sphere | NonuniformSphere | CubeSurface => self.m + 1,
            Helix1D | Helix2D | SwissRoll | Moebius | Spiral => 3,
            Paraboloid => 3 * (self.m + 1),
            Nonlinear => 6 * self.m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use ManifoldKind::*;
        let fail = |msg: String| Err(Error::Spec(msg));
        if self.n < 2 {
            return fail(format!("n ≥ 2, got {}", self.n));
        }
        if self.m < 1 {
            return fail("m ≥ 1".into());
        }
        if self.m > self.p {
            return fail(format!("m ≤ p, got m = {}, p = {}", self.m, self.p));
        }
        let fixed_m = match self.kind {
            Helix1D | Spiral => Some(1),
            Helix2D | SwissRoll | Moebius => Some(2),
            _ => None,
        };
        if let Some(m) = fixed_m {
            if self.m != m {
                return fail(format!("{} fixes m = {m}, got {}", self.kind, self.m));
            }
        }
        let width = self.native_width();
        if self.p < width {
            return fail(format!("{} with m = {} needs p ≥ {width}, got {}", self.kind, self.m, self.p));
        }
        Ok(())
    }
}

/// A generated cloud together with its ground-truth intrinsic dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCloud {
    pub cloud: PointCloud,
    pub true_dim: usize,
    pub spec: ManifoldSpec,
}

fn uniform(rng: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn normal(rng: &mut StreamRng) -> f64 {
    StandardNormal.sample(rng)
}

fn sample_point(kind: ManifoldKind, m: usize, rng: &mut StreamRng, out: &mut [f64]) {
    use ManifoldKind::*;
    match kind {
        Affine | Uniform => out.iter_mut().for_each(|v| *v = rng.random::<f64>()),
        Norm => out.iter_mut().for_each(|v| *v = normal(rng)),
        Sphere => {
            out.iter_mut().for_each(|v| *v = normal(rng));
            normalize(out);
        }
        NonuniformSphere => {
            out[..m].iter_mut().for_each(|v| *v = uniform(rng, -1.0, 1.0));
            out[m] = 1.0;
            normalize(out);
        }
        Helix1D => {
            let t = uniform(rng, 0.0, 2.0 * PI);
            let r = 2.0 + (8.0 * t).cos();
            out.copy_from_slice(&[r * t.cos(), r * t.sin(), (8.0 * t).sin()]);
        }
        Helix2D => {
            let r = uniform(rng, 0.0, 10.0 * PI);
            let s = uniform(rng, 0.0, 10.0 * PI);
            out.copy_from_slice(&[r * s.cos(), r * s.sin(), 0.5 * s]);
        }
        SwissRoll => {
            let t = uniform(rng, 1.5 * PI, 4.5 * PI);
            let h = uniform(rng, 0.0, 21.0);
            out.copy_from_slice(&[t * t.cos(), h, t * t.sin()]);
        }
        Moebius => {
            let t = uniform(rng, 0.0, 2.0 * PI);
            let v = uniform(rng, -1.0, 1.0);
            let r = 1.0 + 0.5 * v * (0.5 * t).cos();
            out.copy_from_slice(&[r * t.cos(), r * t.sin(), 0.5 * v * (0.5 * t).sin()]);
        }
        Spiral => {
            let t = uniform(rng, 0.0, 4.0 * PI);
            out.copy_from_slice(&[t * t.cos(), t * t.sin(), 0.0]);
        }
        Paraboloid => {
            let e0: f64 = Exp1.sample(rng);
            let q = m + 1;
            let mut sq = 0.0;
            for v in out[..m].iter_mut() {
                let e: f64 = Exp1.sample(rng);
                *v = 1.0 / (1.0 + e / e0);
                sq += *v * *v;
            }
            out[m] = sq;
            for i in 0..q {
                let y = out[i];
                out[q + i] = y.sin();
                out[2 * q + i] = y * y;
            }
        }
        Nonlinear => {
            let u: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            for i in 0..m {
                let j = (i + 1) % m;
                let (s, c) = (2.0 * PI * u[i]).sin_cos();
                out[6 * i..6 * i + 6].copy_from_slice(&[c, s, u[j] * c, u[j] * s, u[i] * u[i], u[i] * u[j]]);
            }
        }
        CubeSurface => {
            out.iter_mut().for_each(|v| *v = rng.random::<f64>());
            let face = rng.random_range(0..=m);
            out[face] = if rng.random::<bool>() { 1.0 } else { 0.0 };
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// The generator's native coordinates, before any embedding.
pub fn pre_embedding(spec: &ManifoldSpec) -> Result<PointCloud> {
    spec.validate()?;
    let q = spec.native_width();
    let mut rng = substream(spec.seed, 0);
    let mut data = vec![0.0; spec.n * q];
    for row in data.chunks_exact_mut(q) {
        sample_point(spec.kind, spec.m, &mut rng, row);
    }
    PointCloud::from_flat(spec.n, q, data)
}

/// Random `p × q` matrix with orthonormal columns (`q ≤ p`).
///
/// Gram–Schmidt on Gaussian columns via Householder QR, with column signs fixed
/// so that `R` has a positive diagonal.
pub fn orthonormal_frame(p: usize, q: usize, rng: &mut StreamRng) -> DMatrix<f64> {
    assert!(q <= p, "frame needs q ≤ p");
    let gauss = DMatrix::from_fn(p, q, |_, _| normal(rng));
    let qr = gauss.qr();
    let r = qr.r();
    let mut frame = qr.q();
    for j in 0..q {
        if r[(j, j)] < 0.0 {
            frame.column_mut(j).neg_mut();
        }
    }
    frame
}

pub fn generate(spec: &ManifoldSpec) -> Result<LabeledCloud> {
    let block = pre_embedding(spec)?;
    let q = block.dim();
    let p = spec.p;
    let mut frame_rng = substream(spec.seed, 1);
    let cloud = match spec.kind {
        ManifoldKind::Norm => block.map_points(p, |src, dst| dst[..q].copy_from_slice(src))?,
        ManifoldKind::Affine => {
            let frame = orthonormal_frame(p, q, &mut frame_rng);
            let offset: Vec<f64> = (0..p).map(|_| uniform(&mut frame_rng, -1.0, 1.0)).collect();
            apply_frame(&block, &frame, Some(&offset))?
        }
        _ if q == p => block,
        _ => {
            let frame = orthonormal_frame(p, q, &mut frame_rng);
            apply_frame(&block, &frame, None)?
        }
    };
    Ok(LabeledCloud { cloud: cloud.with_label(spec.dataset_name()), true_dim: spec.m, spec: *spec })
}

fn apply_frame(block: &PointCloud, frame: &DMatrix<f64>, offset: Option<&[f64]>) -> Result<PointCloud> {
    let (p, q) = frame.shape();
    block.map_points(p, |src, dst| {
        for (i, d) in dst.iter_mut().enumerate() {
            let mut acc = offset.map_or(0.0, |o| o[i]);
            for j in 0..q {
                acc += frame[(i, j)] * src[j];
            }
            *d = acc;
        }
    })
}

/// Uniform-in-cube points pushed onto the sphere `S^m ⊂ ℝ^{m+1}`, then embedded in `ℝᵖ`.
pub fn nonuniform_sphere(m: usize, p: usize, n: usize, seed: u64) -> Result<LabeledCloud> {
    generate(&ManifoldSpec::new(ManifoldKind::NonuniformSphere, m, p, n, seed))
}

/// Adds i.i.d. `N(0, σ²)` noise to every coordinate. `sigma == 0` returns the input unchanged.
pub fn add_noise(cloud: &PointCloud, sigma: f64, seed: u64) -> Result<PointCloud> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!("noise sigma must be ≥ 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(cloud.clone());
    }
    let mut rng = substream(seed, 2);
    cloud.map_points(cloud.dim(), |src, dst| {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = s + sigma * normal(&mut rng);
        }
    })
}

/// The twelve synthetic rows of the reference comparison table.
pub fn table1_suite(n: usize) -> Vec<ManifoldSpec> {
    use ManifoldKind::*;
    [
        (Affine, 10, 10),
        (CubeSurface, 30, 35),
        (Helix1D, 1, 3),
        (Helix2D, 2, 13),
        (Moebius, 2, 3),
        (Nonlinear, 6, 36),
        (Norm, 50, 50),
        (Paraboloid, 9, 30),
        (SwissRoll, 2, 3),
        (Sphere, 10, 15),
        (Spiral, 1, 3),
        (Uniform, 50, 55),
    ]
    .into_iter()
    .map(|(kind, m, p)| ManifoldSpec::new(kind, m, p, n, 0))
    .collect()
}

/// Writes one row per point, comma separated, shortest round-trip decimals.
pub fn write_csv<W: Write>(cloud: &PointCloud, mut out: W, header: bool) -> Result<()> {
    let mut line = String::new();
    if header {
        let names: Vec<String> = (0..cloud.dim()).map(|j| format!("x{j}")).collect();
        writeln!(out, "{}", names.join(","))?;
    }
    for point in cloud.points() {
        line.clear();
        for (j, v) in point.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format_float(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// Sidecar metadata written next to a generated CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedMetadata {
    pub spec: ManifoldSpec,
    pub seed: u64,
    pub true_dim: usize,
}
