//! Weighted polynomial least squares with a free intercept.
//!
//! Fits `y ≈ c + η₁x + … + η_ℓ x^ℓ` minimizing `Σ w_k (y_k − c − Σ η_d x_k^d)²`.
//! The abscissae are mapped affinely onto `[-1, 1]` before the weighted
//! Vandermonde matrix is factored with Householder QR; the coefficients are then
//! expanded back into the original monomial basis, so `intercept` is the value
//! of the fit at `x = 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct WlsProblem {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WlsSolution {
    pub intercept: f64,
    /// Coefficients of `x, x², …, x^ℓ`.
    pub eta: Vec<f64>,
    /// Weighted residual sum of squares at the solution.
    pub residual_sum: f64,
    /// Ratio of extreme singular values of the scaled, weighted design matrix.
    pub condition_estimate: f64,
}

impl WlsSolution {
    pub fn predict(&self, x: f64) -> f64 {
        self.eta.iter().rev().fold(0.0, |acc, &c| (acc + c) * x) + self.intercept
    }
}

impl WlsProblem {
    fn validate(&self) -> Result<()> {
        let n = self.xs.len();
        if self.ys.len() != n || self.weights.len() != n {
            return Err(Error::Config(format!(
                "xs, ys and weights must have equal lengths ({}, {}, {})",
                n,
                self.ys.len(),
                self.weights.len()
            )));
        }
        if self.degree < 1 {
            return Err(Error::Config("degree ℓ ≥ 1".into()));
        }
        if n < self.degree + 2 {
            return Err(Error::RankDeficient(format!(
                "{n} observations cannot support degree {} with intercept",
                self.degree
            )));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Config("weights must be finite and positive".into()));
        }
        if self.xs.iter().chain(&self.ys).any(|v| !v.is_finite()) {
            return Err(Error::Config("xs and ys must be finite".into()));
        }
        if self.xs.iter().all(|&x| x == self.xs[0]) {
            return Err(Error::RankDeficient("all abscissae are identical".into()));
        }
        Ok(())
    }
}

pub fn solve_wls(problem: &WlsProblem) -> Result<WlsSolution> {
    problem.validate()?;
    fit(&problem.xs, &problem.ys, &problem.weights, problem.degree)
}

/// Unchecked core of [`solve_wls`]; also accepts `degree == 0` (weighted mean).
pub(crate) fn fit(xs: &[f64], ys: &[f64], weights: &[f64], degree: usize) -> Result<WlsSolution> {
    let n = xs.len();
    let cols = degree + 1;
    if n < cols {
        return Err(Error::RankDeficient(format!("{n} observations for {cols} coefficients")));
    }

    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let center = 0.5 * (lo + hi);
    let half_range = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };
    let w_max = weights.iter().copied().fold(0.0, f64::max);

    let mut design = DMatrix::<f64>::zeros(n, cols);
    let mut rhs = DVector::<f64>::zeros(n);
    for i in 0..n {
        let sw = (weights[i] / w_max).sqrt();
        let t = (xs[i] - center) / half_range;
        let mut power = 1.0;
        for j in 0..cols {
            design[(i, j)] = sw * power;
            power *= t;
        }
        rhs[i] = sw * ys[i];
    }

    let singular = design.clone().svd(false, false).singular_values;
    let s_max = singular.max();
    let s_min = singular.min();
    if !(s_max > 0.0) || s_min < RANK_TOLERANCE * s_max {
        return Err(Error::RankDeficient(format!(
            "numerical rank below {cols} (singular values {s_min:e} / {s_max:e})"
        )));
    }

    let qr = design.qr();
    let qtb = qr.q().transpose() * &rhs;
    let scaled = qr
        .r()
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::RankDeficient("singular triangular factor".into()))?;

    let residual_sum = (0..n)
        .map(|i| {
            let t = (xs[i] - center) / half_range;
            let fitted = scaled.iter().rev().fold(0.0, |acc, &c| acc * t + c);
            let r = ys[i] - fitted;
            weights[i] * r * r
        })
        .sum();

    let coeffs = expand_monomials(scaled.as_slice(), center, half_range);
    Ok(WlsSolution {
        intercept: coeffs[0],
        eta: coeffs[1..].to_vec(),
        residual_sum,
        condition_estimate: s_max / s_min,
    })
}

/// Rewrites `Σ_j b_j ((x − c)/s)^j` as `Σ_d a_d x^d`.
fn expand_monomials(scaled: &[f64], center: f64, half_range: f64) -> Vec<f64> {
    let cols = scaled.len();
    let mut out = vec![0.0; cols];
    for (j, &b) in scaled.iter().enumerate() {
        let lead = b / half_range.powi(j as i32);
        let mut binom = 1.0;
        for (d, slot) in out.iter_mut().enumerate().take(j + 1) {
            *slot += lead * binom * (-center).powi((j - d) as i32);
            binom = binom * (j - d) as f64 / (d + 1) as f64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem(xs: &[f64], ys: &[f64], weights: &[f64], degree: usize) -> WlsProblem {
        WlsProblem { xs: xs.to_vec(), ys: ys.to_vec(), weights: weights.to_vec(), degree }
    }

    #[test]
    fn exact_line() {
        let s = solve_wls(&problem(&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0], &[1.0; 3], 1)).unwrap();
        assert!((s.intercept - 1.0).abs() < 1e-12);
        assert!((s.eta[0] - 1.0).abs() < 1e-12);
        assert!(s.residual_sum < 1e-24);
    }

    #[test]
    fn flat_response() {
        let xs = [0.3, 0.7, 1.1, 1.9, 2.0];
        let s = solve_wls(&problem(&xs, &[4.25; 5], &[1.0, 3.0, 0.5, 2.0, 9.0], 2)).unwrap();
        assert!((s.intercept - 4.25).abs() < 1e-12);
        assert!(s.eta.iter().all(|e| e.abs() < 1e-10));
    }

    #[test]
    fn monomial_expansion_matches_direct_evaluation() {
        let scaled = [0.5, -1.25, 2.0, 0.75];
        let (c, s) = (3.0, 0.4);
        let a = expand_monomials(&scaled, c, s);
        for x in [-1.0, 0.0, 2.5, 3.3] {
            let direct: f64 = scaled.iter().enumerate().map(|(j, b)| b * ((x - c) / s).powi(j as i32)).sum();
            let mono: f64 = a.iter().enumerate().map(|(d, v)| v * x.powi(d as i32)).sum();
            assert!((direct - mono).abs() < 1e-9 * direct.abs().max(1.0), "{direct} vs {mono}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            solve_wls(&problem(&[1.0, 2.0, 3.0], &[1.0; 3], &[1.0; 3], 2)),
            Err(Error::RankDeficient(_))
        ));
        assert!(matches!(
            solve_wls(&problem(&[1.0; 4], &[1.0, 2.0, 3.0, 4.0], &[1.0; 4], 1)),
            Err(Error::RankDeficient(_))
        ));
        assert!(solve_wls(&problem(&[1.0, 2.0, 3.0], &[1.0; 3], &[1.0, 0.0, 1.0], 1)).is_err());
        assert!(solve_wls(&problem(&[1.0, 2.0, 3.0], &[1.0; 2], &[1.0; 3], 1)).is_err());
    }

    #[test]
    fn detects_numerical_rank_loss() {
        // Two distinct abscissae cannot pin down a quadratic.
        let xs = [1.0, 1.0, 1.0, 2.0, 2.0];
        assert!(matches!(
            solve_wls(&problem(&xs, &[1.0, 1.1, 0.9, 2.0, 2.1], &[1.0; 5], 2)),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn degree_zero_is_weighted_mean() {
        let s = fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0], &[1.0, 1.0, 2.0], 0).unwrap();
        assert!((s.intercept - 11.0 / 4.0).abs() < 1e-14);
        assert!(s.eta.is_empty());
    }

    fn arb_problem() -> impl Strategy<Value = WlsProblem> {
        (4usize..12, 1usize..3).prop_flat_map(|(n, degree)| {
            (
                proptest::collection::vec(-5.0f64..5.0, n),
                proptest::collection::vec(-10.0f64..10.0, n),
                proptest::collection::vec(0.01f64..100.0, n),
            )
                .prop_map(move |(mut xs, ys, weights)| {
                    // Spread the abscissae so the design stays well conditioned.
                    for (i, x) in xs.iter_mut().enumerate() {
                        *x = *x * 0.1 + i as f64;
                    }
                    WlsProblem { xs, ys, weights, degree }
                })
        })
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    proptest! {
        #[test]
        fn weight_scale_invariance(p in arb_problem(), c in 1e-3f64..1e3) {
            let base = solve_wls(&p).unwrap();
            let scaled = solve_wls(&WlsProblem { weights: p.weights.iter().map(|w| w * c).collect(), ..p.clone() }).unwrap();
            prop_assert!(rel_close(base.intercept, scaled.intercept, 1e-10));
            for (a, b) in base.eta.iter().zip(&scaled.eta) {
                prop_assert!(rel_close(*a, *b, 1e-10));
            }
        }

        #[test]
        fn row_permutation_invariance(p in arb_problem(), shift in 1usize..11) {
            let n = p.xs.len();
            let rot = |v: &Vec<f64>| (0..n).map(|i| v[(i + shift) % n]).collect::<Vec<_>>();
            let base = solve_wls(&p).unwrap();
            let perm = solve_wls(&WlsProblem { xs: rot(&p.xs), ys: rot(&p.ys), weights: rot(&p.weights), degree: p.degree }).unwrap();
            prop_assert!(rel_close(base.intercept, perm.intercept, 1e-10));
        }

        #[test]
        fn duplicated_row_equals_doubled_weight(p in arb_problem(), pick in 0usize..12) {
            let i = pick % p.xs.len();
            let mut dup = p.clone();
            dup.xs.push(p.xs[i]);
            dup.ys.push(p.ys[i]);
            dup.weights.push(p.weights[i]);
            let mut heavy = p.clone();
            heavy.weights[i] *= 2.0;
            let a = solve_wls(&dup).unwrap();
            let b = solve_wls(&heavy).unwrap();
            prop_assert!(rel_close(a.intercept, b.intercept, 1e-10));
            for (x, y) in a.eta.iter().zip(&b.eta) {
                prop_assert!(rel_close(*x, *y, 1e-10));
            }
        }

        #[test]
        fn exact_polynomial_recovery(p in arb_problem(), coeffs in proptest::collection::vec(-3.0f64..3.0, 3)) {
            let ys: Vec<f64> = p.xs.iter().map(|&x| {
                (0..=p.degree).map(|d| coeffs[d] * x.powi(d as i32)).sum()
            }).collect();
            let q = WlsProblem { ys: ys.clone(), ..p.clone() };
            let s = solve_wls(&q).unwrap();
            let scale: f64 = ys.iter().zip(&q.weights).map(|(y, w)| w * y * y).sum();
            prop_assert!(s.residual_sum <= 1e-16 * scale, "residual {} vs scale {}", s.residual_sum, scale);
            prop_assert!((s.intercept - coeffs[0]).abs() < 1e-8);
        }

        #[test]
        fn residual_matches_objective(p in arb_problem()) {
            let s = solve_wls(&p).unwrap();
            let objective: f64 = p.xs.iter().zip(&p.ys).zip(&p.weights)
                .map(|((&x, &y), &w)| { let r = y - s.predict(x); w * r * r })
                .sum();
            let scale: f64 = p.ys.iter().zip(&p.weights).map(|(y, w)| w * y * y).sum();
            prop_assert!((s.residual_sum - objective).abs() <= 1e-8 * objective.max(1e-8 * scale));
        }
    }
}
