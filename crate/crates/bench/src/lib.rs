//! Scaling harness: generates histories of increasing size, times the checker on
//! each and summarizes how the running time grows.

use std::io::Write;

use linmon::{check, generate_linearizable, mutate, AdtKind, GenConfig, MutationKind};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub adt: AdtKind,
    /// Ascending history sizes, in operations.
    pub sizes: Vec<usize>,
    pub reps: usize,
    /// Rep `r` of every size is generated from `seed + r`.
    pub seed: u64,
    /// Also time a value-swapped (almost surely non-linearizable) copy of each history.
    pub include_mutants: bool,
    /// Generator settings; `adt`, `n_ops` and `seed` are overridden per row.
    pub workload: GenConfig,
}

impl BenchPlan {
    /// A workload shaped like a 20-producer, 20-consumer stress test.
    pub fn new(adt: AdtKind, sizes: Vec<usize>, reps: usize) -> Self {
        BenchPlan {
            adt,
            sizes,
            reps,
            seed: 1,
            include_mutants: false,
            workload: GenConfig {
                n_procs: 40,
                relax: 80,
                peek_ratio: 0.1,
                fail_ratio: 0.1,
                empty_ratio: 0.05,
                ..Default::default()
            },
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() || self.reps == 0 {
            return Err(BenchError::EmptyPlan);
        }
        if !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(BenchError::UnsortedSizes);
        }
        self.workload.validate().map_err(|e| BenchError::Generate(e.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("plan needs at least one size and one rep")]
    EmptyPlan,
    #[error("sizes must be strictly ascending")]
    UnsortedSizes,
    #[error("generation failed: {0}")]
    Generate(String),
    #[error("generated history was rejected: {0}")]
    Invalid(#[from] linmon::CheckError),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One timed check. The CSV file carries the first six fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub adt: AdtKind,
    pub size: usize,
    pub rep: usize,
    pub seed: u64,
    pub verdict: String,
    pub elapsed_ns: u128,
    #[serde(skip)]
    pub mutant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeSummary {
    pub size: usize,
    pub reps: usize,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub max_ns: u128,
    /// `median / (n log2 n)`; flat across sizes for log-linear growth.
    pub ns_per_nlogn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub adt: AdtKind,
    pub sizes: Vec<SizeSummary>,
    pub mutant_sizes: Vec<SizeSummary>,
    /// `median(n_{i+1}) / median(n_i)` for consecutive sizes.
    pub growth: Vec<f64>,
    pub rejected_linearizable: usize,
}

pub fn median(xs: &[u128]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn summarize(size: usize, times: &[u128]) -> SizeSummary {
    let mean = times.iter().sum::<u128>() as f64 / times.len() as f64;
    let med = median(times);
    let n = size.max(2) as f64;
    SizeSummary {
        size,
        reps: times.len(),
        mean_ns: mean,
        median_ns: med,
        max_ns: times.iter().copied().max().unwrap_or(0),
        ns_per_nlogn: med / (n * n.log2()),
    }
}

/// Runs the plan, streaming one CSV row per timed check into `out` when given.
/// Timing covers standardization and checking only, never generation or I/O.
pub fn run_bench<W: Write>(
    plan: &BenchPlan,
    out: Option<&mut csv::Writer<W>>,
) -> Result<(BenchSummary, Vec<BenchRow>), BenchError> {
    plan.validate()?;
    let mut out = out;
    let mut rows = Vec::new();
    let mut sizes = Vec::new();
    let mut mutant_sizes = Vec::new();
    let mut rejected = 0;
    for &size in &plan.sizes {
        let mut times = Vec::with_capacity(plan.reps);
        let mut mutant_times = Vec::new();
        for rep in 0..plan.reps {
            let seed = plan.seed + rep as u64;
            let cfg = GenConfig { adt: plan.adt, n_ops: size, seed, ..plan.workload.clone() };
            let h = generate_linearizable(&cfg).map_err(|e| BenchError::Generate(e.to_string()))?;
            let mut histories = vec![(h, false)];
            if plan.include_mutants {
                let m = mutate(&histories[0].0, MutationKind::SwapRemoveValues, seed).history;
                histories.push((m, true));
            }
            for (h, mutant) in histories {
                let report = check(&h)?;
                if !mutant && !report.verdict.is_linearizable() {
                    rejected += 1;
                }
                let row = BenchRow {
                    adt: plan.adt,
                    size,
                    rep,
                    seed,
                    verdict: report.verdict.name().to_string(),
                    elapsed_ns: report.elapsed.as_nanos(),
                    mutant,
                };
                if mutant {
                    mutant_times.push(row.elapsed_ns);
                } else {
                    times.push(row.elapsed_ns);
                }
                if let Some(w) = out.as_deref_mut() {
                    w.serialize(&row)?;
                    w.flush().map_err(csv::Error::from)?;
                }
                rows.push(row);
            }
        }
        sizes.push(summarize(size, &times));
        if !mutant_times.is_empty() {
            mutant_sizes.push(summarize(size, &mutant_times));
        }
    }
    let growth = sizes.windows(2).map(|w| w[1].median_ns / w[0].median_ns.max(1.0)).collect();
    Ok((BenchSummary { adt: plan.adt, sizes, mutant_sizes, growth, rejected_linearizable: rejected }, rows))
}

pub fn summary_json(summary: &BenchSummary) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
    }

    #[test]
    fn rejects_bad_plans() {
        let mut plan = BenchPlan::new(AdtKind::Queue, vec![], 1);
        assert!(matches!(plan.validate(), Err(BenchError::EmptyPlan)));
        plan.sizes = vec![10, 5];
        assert!(matches!(plan.validate(), Err(BenchError::UnsortedSizes)));
    }
}
