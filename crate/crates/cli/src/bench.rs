use std::fs::File;
use std::path::PathBuf;

use clap::Args;
use linmon::AdtKind;
use linmon_bench::{run_bench, summary_json, BenchError, BenchPlan};

use crate::Status;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    adt: AdtKind,
    /// Comma-separated, strictly ascending operation counts.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also time a value-swapped copy of every history.
    #[arg(long)]
    mutants: bool,
    /// Number of simulated processes.
    #[arg(long)]
    procs: Option<usize>,
    /// Write one row per timed check.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

pub fn run(args: BenchArgs) -> Status {
    let mut plan = BenchPlan::new(args.adt, args.sizes, args.reps);
    plan.seed = args.seed;
    plan.include_mutants = args.mutants;
    if let Some(p) = args.procs {
        plan.workload.n_procs = p;
    }
    if let Err(e) = plan.validate() {
        eprintln!("error: {e}");
        return Status::InputError;
    }
    let result = match &args.csv {
        Some(path) => match File::create(path) {
            Ok(f) => run_bench(&plan, Some(&mut csv::Writer::from_writer(f))),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return Status::InputError;
            }
        },
        None => run_bench::<File>(&plan, None),
    };
    let summary = match result {
        Ok((summary, _)) => summary,
        Err(e @ (BenchError::EmptyPlan | BenchError::UnsortedSizes | BenchError::Generate(_))) => {
            eprintln!("error: {e}");
            return Status::InputError;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Internal;
        }
    };
    if args.json {
        println!("{}", summary_json(&summary));
    } else {
        println!(
            "{:>10} {:>5} {:>12} {:>12} {:>12} {:>14}",
            "size", "reps", "mean_ms", "median_ms", "max_ms", "ns/(n log n)"
        );
        for s in &summary.sizes {
            println!(
                "{:>10} {:>5} {:>12.3} {:>12.3} {:>12.3} {:>14.3}",
                s.size,
                s.reps,
                s.mean_ns / 1e6,
                s.median_ns / 1e6,
                s.max_ns as f64 / 1e6,
                s.ns_per_nlogn
            );
        }
        if !summary.growth.is_empty() {
            let g: Vec<String> = summary.growth.iter().map(|g| format!("{g:.2}")).collect();
            println!("growth per step: {}", g.join(", "));
        }
        if summary.rejected_linearizable > 0 {
            println!("warning: {} generated histories were rejected", summary.rejected_linearizable);
        }
    }
    Status::Success
}
