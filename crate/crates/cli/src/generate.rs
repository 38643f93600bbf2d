use std::path::PathBuf;

use clap::Args;
use linmon::{generate_linearizable, mutate, serialize_history, AdtKind, Format, GenConfig, MutationKind, Time};
use serde::Serialize;

use crate::Status;

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    adt: AdtKind,
    #[arg(long, default_value_t = 100)]
    ops: usize,
    #[arg(long, default_value_t = 4)]
    procs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    peek_ratio: f64,
    #[arg(long, default_value_t = 0.1)]
    fail_ratio: f64,
    #[arg(long, default_value_t = 0.1)]
    empty_ratio: f64,
    /// Maximum widening of each window around its linearization point, in ticks.
    #[arg(long, default_value_t = 8)]
    relax: Time,
    #[arg(long)]
    max_values: Option<usize>,
    /// Apply one mutation; the result is usually, not always, non-linearizable.
    #[arg(long)]
    mutate: Option<MutationKind>,
    #[arg(long, default_value = "ops")]
    format: Format,
    /// Output file; the history goes to stdout and the summary to stderr when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema: &'static str,
    adt: AdtKind,
    n_ops: usize,
    seed: u64,
    mutation: Option<&'static str>,
    changed: bool,
    verdict: &'static str,
    out: Option<&'a str>,
}

pub fn run(args: GenerateArgs) -> Status {
    let cfg = GenConfig {
        adt: args.adt,
        n_ops: args.ops,
        n_procs: args.procs,
        seed: args.seed,
        peek_ratio: args.peek_ratio,
        fail_ratio: args.fail_ratio,
        empty_ratio: args.empty_ratio,
        relax: args.relax,
        max_values: args.max_values,
    };
    let mut h = match generate_linearizable(&cfg) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::InputError;
        }
    };
    let mut changed = false;
    if let Some(kind) = args.mutate {
        let m = mutate(&h, kind, args.seed);
        changed = m.changed;
        h = m.history;
    }
    let text = match serialize_history(&h, args.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Internal;
        }
    };
    let out = args.out.as_ref().map(|p| p.display().to_string());
    let summary = Summary {
        schema: "linmon.generate/1",
        adt: h.adt,
        n_ops: h.len(),
        seed: args.seed,
        mutation: args.mutate.map(MutationKind::name),
        changed,
        verdict: if args.mutate.is_some() { "unknown" } else { "linearizable" },
        out: out.as_deref(),
    };
    let summary = serde_json::to_string(&summary).expect("summary serializes");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return Status::InputError;
            }
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Status::Success
}
