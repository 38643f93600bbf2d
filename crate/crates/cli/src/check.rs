use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::Args;
use linmon::{
    check, find_linearization, parse_history, validate_unambiguous, validate_well_formed, AdtKind, CheckError, Format,
    OracleBudget, OracleError, Stage,
};
use serde::Serialize;

use crate::Status;

pub const SCHEMA: &str = "linmon.check/1";

#[derive(Args)]
pub struct CheckArgs {
    /// Data type; required when the file has no `adt` header.
    #[arg(long)]
    adt: Option<AdtKind>,
    /// History file; repeat to check several.
    #[arg(long = "input", short, required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "ops")]
    format: Format,
    /// Decide by exhaustive search instead of the fast checker.
    #[arg(long)]
    oracle: bool,
    /// Print one JSON object per input instead of a summary line.
    #[arg(long)]
    json: bool,
    /// Check up to this many files at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Serialize)]
struct Report {
    schema: &'static str,
    input: String,
    adt: AdtKind,
    n_ops: usize,
    verdict: &'static str,
    stage: &'static str,
    removal_order: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    linearization: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    elapsed_ns: u128,
    warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Failure {
    schema: &'static str,
    input: String,
    error: String,
}

enum FileResult {
    Checked(Report, Status),
    Failed(Failure, Status),
}

fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::Validation => "validation",
        Stage::Standardization => "standardization",
        Stage::Checker => "checker",
    }
}

fn fail(input: &str, error: String, status: Status) -> FileResult {
    FileResult::Failed(Failure { schema: SCHEMA, input: input.to_string(), error }, status)
}

fn check_file(path: &PathBuf, args: &CheckArgs) -> FileResult {
    let input = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(&input, format!("cannot read: {e}"), Status::InputError),
    };
    let parsed = match parse_history(&text, args.format, args.adt) {
        Ok(p) => p,
        Err(e) => return fail(&input, e.to_string(), Status::InputError),
    };
    let h = parsed.history;
    let mut report = Report {
        schema: SCHEMA,
        input: input.clone(),
        adt: h.adt,
        n_ops: h.len(),
        verdict: "",
        stage: "",
        removal_order: Vec::new(),
        linearization: None,
        detail: None,
        elapsed_ns: 0,
        warnings: parsed.warnings,
    };
    let linearizable = if args.oracle {
        if let Err(e) = validate_well_formed(&h) {
            return fail(&input, CheckError::IllFormed(e).to_string(), Status::InputError);
        }
        if let Err(e) = validate_unambiguous(&h) {
            return fail(&input, CheckError::Ambiguous(e).to_string(), Status::InputError);
        }
        let started = Instant::now();
        let found = find_linearization(&h, OracleBudget::default());
        report.elapsed_ns = started.elapsed().as_nanos();
        report.stage = "oracle";
        match found {
            Ok(lin) => {
                let ok = lin.is_some();
                report.linearization = Some(lin.unwrap_or_default());
                ok
            }
            Err(e @ (OracleError::TooManyOps { .. } | OracleError::BudgetExceeded(_))) => {
                return fail(&input, format!("BUDGET_EXCEEDED: {e}"), Status::Internal);
            }
        }
    } else {
        match check(&h) {
            Ok(r) => {
                report.elapsed_ns = r.elapsed.as_nanos();
                report.stage = stage_name(r.stage);
                report.removal_order = r.removal_order;
                report.detail = r.detail;
                r.verdict.is_linearizable()
            }
            Err(e) => return fail(&input, e.to_string(), Status::InputError),
        }
    };
    report.verdict = if linearizable { "linearizable" } else { "non_linearizable" };
    let status = if linearizable { Status::Success } else { Status::NonLinearizable };
    FileResult::Checked(report, status)
}

fn check_all(args: &CheckArgs) -> Vec<FileResult> {
    let jobs = args.jobs.clamp(1, args.inputs.len().max(1));
    if jobs == 1 {
        return args.inputs.iter().map(|p| check_file(p, args)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<FileResult>>> = Mutex::new((0..args.inputs.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = args.inputs.get(i) else {
                    break;
                };
                let result = check_file(path, args);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(result);
            });
        }
    });
    slots.into_inner().expect("workers finished").into_iter().map(|r| r.expect("every input was checked")).collect()
}

pub fn run(args: CheckArgs) -> Status {
    let mut worst = Status::Success;
    for result in check_all(&args) {
        match result {
            FileResult::Checked(report, status) => {
                for w in &report.warnings {
                    eprintln!("{}: warning: {w}", report.input);
                }
                if args.json {
                    println!("{}", serde_json::to_string(&report).expect("report serializes"));
                } else {
                    let extra = report.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default();
                    println!(
                        "{}: {} ({} ops, {}, stage {}, {:.3} ms){extra}",
                        report.input,
                        report.verdict,
                        report.n_ops,
                        report.adt,
                        report.stage,
                        report.elapsed_ns as f64 / 1e6
                    );
                }
                worst = worst.max(status);
            }
            FileResult::Failed(failure, status) => {
                eprintln!("{}: error: {}", failure.input, failure.error);
                if args.json {
                    println!("{}", serde_json::to_string(&failure).expect("failure serializes"));
                }
                worst = worst.max(status);
            }
        }
    }
    worst
}
