//! CSV persistence for benchmark runs, profiles and noise sweeps.

use std::collections::HashMap;
use std::io::{Read, Write};

use super::{BenchmarkEntry, BenchmarkRun, DolanMoreCurve, NoiseRow};
use crate::error::{Error, Result};
use crate::manifolds::{format_float, ManifoldKind, ManifoldSpec};
use crate::report::Method;

const RUN_COLUMNS: [&str; 11] =
    ["dataset", "kind", "m", "p", "n", "replicate", "method", "estimate", "abs_error", "wall_time_s", "error"];

pub fn write_run_csv<W: Write>(run: &BenchmarkRun, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUN_COLUMNS)?;
    for e in &run.entries {
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        w.write_record([
            e.dataset.clone(),
            e.spec.kind.to_string(),
            e.spec.m.to_string(),
            e.spec.p.to_string(),
            e.spec.n.to_string(),
            e.replicate.to_string(),
            e.method.to_string(),
            opt(e.estimate),
            opt(e.abs_error()),
            format_float(e.wall_time),
            e.failure.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a run written by [`write_run_csv`]. Suite positions are reassigned in
/// order of first appearance; seeds are not stored and come back as zero.
pub fn read_run_csv<R: Read>(input: R) -> Result<BenchmarkRun> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("run CSV is missing column `{name}`")))
    };
    let idx: Vec<usize> = RUN_COLUMNS[..10].iter().map(|c| col(c)).collect::<Result<_>>()?;
    let error_col = headers.iter().position(|h| h == "error");

    let mut spec_index: HashMap<(String, ManifoldSpec), usize> = HashMap::new();
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", line + 2));
        let field = |i: usize| record.get(idx[i]).unwrap_or("");
        let int = |i: usize, what: &str| field(i).parse::<usize>().map_err(|_| bad(what));
        let float = |i: usize, what: &str| -> Result<Option<f64>> {
            match field(i) {
                "" => Ok(None),
                s => s.parse::<f64>().map(Some).map_err(|_| bad(what)),
            }
        };
        let dataset = field(0).to_string();
        let kind = ManifoldKind::parse(field(1)).ok_or_else(|| bad("kind"))?;
        let spec = ManifoldSpec::new(kind, int(2, "m")?, int(3, "p")?, int(4, "n")?, 0);
        let replicate = int(5, "replicate")?;
        let method = Method::parse(field(6)).ok_or_else(|| bad("method"))?;
        let estimate = float(7, "estimate")?;
        let wall_time = float(9, "wall_time_s")?.unwrap_or(0.0);
        let failure = error_col
            .and_then(|c| record.get(c))
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .or_else(|| estimate.is_none().then(|| "missing estimate".to_string()));
        let next = spec_index.len();
        let spec_index = *spec_index.entry((dataset.clone(), spec)).or_insert(next);
        entries.push(BenchmarkEntry {
            spec_index,
            spec,
            dataset,
            replicate,
            method,
            true_dim: spec.m,
            estimate,
            failure,
            wall_time,
        });
    }
    Ok(BenchmarkRun { entries })
}

pub fn write_curves_csv<W: Write>(curves: &[DolanMoreCurve], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "tau", "fraction"])?;
    for c in curves {
        for (t, f) in c.taus.iter().zip(&c.fractions) {
            w.write_record([c.method.to_string(), format_float(*t), format_float(*f)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_noise_csv<W: Write>(rows: &[NoiseRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "method", "mpe"])?;
    for r in rows {
        w.write_record([format_float(r.sigma), r.method.to_string(), format_float(r.mpe)])?;
    }
    w.flush()?;
    Ok(())
}
