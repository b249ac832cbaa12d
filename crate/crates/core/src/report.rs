//! Aggregation of simulation traces into quantile tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategies::{BlockSchedule, Trace};

/// Linear-interpolation quantile of an ascending slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = p.clamp(0.0, 1.0) * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

fn sorted_finite(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.filter(|x| !x.is_nan()).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileRow {
    pub n: usize,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
    pub max: f64,
    pub median_r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub strategy: String,
    pub replications: usize,
    pub seeds: Vec<u64>,
    pub schedule: Option<BlockSchedule>,
    pub violations: Vec<usize>,
    pub total_violations: usize,
    pub step_failures: usize,
    pub rows: Vec<QuantileRow>,
}

/// Per-round quantiles of `dist` across replications, truncated to the
/// shortest trace.
pub fn report(traces: &[Trace]) -> Result<Report> {
    let first = traces.first().ok_or_else(|| Error::Invalid("report needs at least one trace".into()))?;
    let len = traces.iter().map(Trace::len).min().unwrap_or(0);
    let rows = (0..len)
        .map(|k| {
            let d = sorted_finite(traces.iter().map(|t| t.dist[k]));
            let r = sorted_finite(traces.iter().map(|t| t.dist_r[k]));
            QuantileRow {
                n: k + 1,
                q10: quantile(&d, 0.1),
                median: quantile(&d, 0.5),
                q90: quantile(&d, 0.9),
                max: d.last().copied().unwrap_or(f64::NAN),
                median_r: quantile(&r, 0.5),
            }
        })
        .collect();
    let violations: Vec<usize> = traces.iter().map(|t| t.violations).collect();
    Ok(Report {
        strategy: first.header.strategy.clone(),
        replications: traces.len(),
        seeds: traces.iter().map(|t| t.header.seed).collect(),
        schedule: first.header.schedule.clone(),
        total_violations: violations.iter().sum(),
        violations,
        step_failures: traces.iter().map(|t| t.step_failures).sum(),
        rows,
    })
}

impl Report {
    pub fn to_csv(&self) -> String {
        let fmt = |v: f64| if v.is_nan() { String::new() } else { format!("{v}") };
        let mut out = String::from("n,q10,median,q90,max,median_R\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                fmt(r.q10),
                fmt(r.median),
                fmt(r.q90),
                fmt(r.max),
                fmt(r.median_r)
            ));
        }
        out
    }

    pub fn row(&self, n: usize) -> Option<&QuantileRow> {
        n.checked_sub(1).and_then(|k| self.rows.get(k))
    }
}
