//! Dolan–More performance profiles.
//!
//! A problem is one (dataset, replicate) pair. With `e_{i,a}` the absolute error
//! of method `a` on problem `i`, the profile is
//!
//! ```text
//! r_{i,a} = e_{i,a} / max(min_b e_{i,b}, ε)
//! p_a(τ)  = #{ i : r_{i,a} ≤ τ } / #problems
//! ```
//!
//! Failed estimates have infinite error and never count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BenchmarkRun;
use crate::error::{Error, Result};
use crate::report::Method;

/// Floor on the best error, so exact estimates do not divide by zero.
pub const RATIO_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DolanMoreCurve {
    pub method: Method,
    pub taus: Vec<f64>,
    pub fractions: Vec<f64>,
}

impl DolanMoreCurve {
    /// `p_a(τ)` at the first grid point `≥ tau`.
    pub fn at(&self, tau: f64) -> Option<f64> {
        self.taus.iter().position(|&t| t >= tau).map(|i| self.fractions[i])
    }
}

pub fn dolan_more(run: &BenchmarkRun, taus: &[f64]) -> Result<Vec<DolanMoreCurve>> {
    let methods = run.methods();
    if methods.len() < 2 {
        return Err(Error::Config(format!("performance profiles need ≥ 2 methods, got {}", methods.len())));
    }
    if taus.is_empty() || taus.iter().any(|t| !(*t >= 1.0 && t.is_finite())) {
        return Err(Error::Config("tau grid must be nonempty with every τ ≥ 1".into()));
    }
    let mut grid = taus.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut problems: BTreeMap<(usize, usize), Vec<Option<f64>>> = BTreeMap::new();
    for e in &run.entries {
        let slot = methods.iter().position(|&m| m == e.method).expect("method listed");
        let errors = problems.entry(e.problem_key()).or_insert_with(|| vec![None; methods.len()]);
        if errors[slot].is_some() {
            return Err(Error::Config(format!(
                "duplicate {} entry for dataset {} replicate {}",
                e.method, e.dataset, e.replicate
            )));
        }
        errors[slot] = Some(e.abs_error().unwrap_or(f64::INFINITY));
    }

    let mut ratios: Vec<Vec<f64>> = vec![Vec::with_capacity(problems.len()); methods.len()];
    for (&(spec_index, replicate), errors) in &problems {
        let mut row = Vec::with_capacity(errors.len());
        for (slot, e) in errors.iter().enumerate() {
            match e {
                Some(v) => row.push(*v),
                None => {
                    return Err(Error::MissingEntries(format!(
                        "no {} entry for suite item {spec_index} replicate {replicate}",
                        methods[slot]
                    )))
                }
            }
        }
        let best = row.iter().copied().fold(f64::INFINITY, f64::min);
        for (slot, e) in row.into_iter().enumerate() {
            ratios[slot].push(e / best.max(RATIO_EPSILON));
        }
    }

    let total = problems.len() as f64;
    Ok(methods
        .iter()
        .zip(ratios)
        .map(|(&method, r)| DolanMoreCurve {
            method,
            taus: grid.clone(),
            fractions: grid.iter().map(|&tau| r.iter().filter(|&&x| x <= tau).count() as f64 / total).collect(),
        })
        .collect())
}
