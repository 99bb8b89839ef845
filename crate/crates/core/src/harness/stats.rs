use serde::{Deserialize, Serialize};

use crate::algorithms::{RunRecord, RunStatus};
use crate::error::{Error, Result};

/// Aggregate over the runs of one arm at one problem size. Column order is
/// the CSV header order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub arm: String,
    pub n: usize,
    pub runs: usize,
    /// Runs that reached full coverage. Less than `runs` means some runs hit
    /// the budget and their (censored) counts are included in the statistics.
    pub covered: usize,
    pub mean_evals: f64,
    pub stddev_evals: f64,
    pub min_evals: u64,
    pub max_evals: u64,
}

impl SummaryRow {
    pub fn from_records(arm: &str, n: usize, records: &[RunRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::config("cannot summarize zero runs"));
        }
        let evals: Vec<f64> = records.iter().map(|r| r.evaluations as f64).collect();
        Ok(Self {
            arm: arm.to_string(),
            n,
            runs: records.len(),
            covered: records
                .iter()
                .filter(|r| r.status == RunStatus::Covered)
                .count(),
            mean_evals: mean(&evals),
            stddev_evals: sample_stddev(&evals),
            min_evals: records.iter().map(|r| r.evaluations).min().unwrap_or(0),
            max_evals: records.iter().map(|r| r.evaluations).max().unwrap_or(0),
        })
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard deviation with the `runs - 1` denominator; 0 for a single value.
pub fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speedup {
    pub n: usize,
    pub ratio: f64,
}

/// `mean_a / mean_b` per problem size. Both row sets must cover the same
/// sizes.
pub fn speedup_table(rows_a: &[SummaryRow], rows_b: &[SummaryRow]) -> Result<Vec<Speedup>> {
    let mut a: Vec<&SummaryRow> = rows_a.iter().collect();
    let mut b: Vec<&SummaryRow> = rows_b.iter().collect();
    a.sort_by_key(|r| r.n);
    b.sort_by_key(|r| r.n);
    let sizes_a: Vec<usize> = a.iter().map(|r| r.n).collect();
    let sizes_b: Vec<usize> = b.iter().map(|r| r.n).collect();
    if sizes_a != sizes_b {
        return Err(Error::config(format!(
            "row sets cover different sizes: {sizes_a:?} vs {sizes_b:?}"
        )));
    }
    Ok(a.iter()
        .zip(&b)
        .map(|(ra, rb)| Speedup {
            n: ra.n,
            ratio: ra.mean_evals / rb.mean_evals,
        })
        .collect())
}
