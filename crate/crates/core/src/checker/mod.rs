//! Per-type checkers and the end-to-end `check` pipeline.

pub mod pqueue;
pub mod queue;
pub mod register;
pub mod set;
pub mod stack;

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::framework::{CheckReport, Outcome, Stage, Verdict};
use crate::model::{validate_unambiguous, validate_well_formed, AdtKind, History, Violation};
use crate::standardize::{standardize, StandardizedHistory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("history is not well-formed: {}", join(.0))]
    IllFormed(Vec<Violation>),
    #[error("history is ambiguous in values {0:?}")]
    Ambiguous(BTreeSet<u64>),
}

fn join(vs: &[Violation]) -> String {
    let mut parts: Vec<String> = vs.iter().take(5).map(|v| v.to_string()).collect();
    if vs.len() > 5 {
        parts.push(format!("and {} more", vs.len() - 5));
    }
    parts.join("; ")
}

/// Runs the type's checker on an already standardized container history.
pub fn check_standardized(sh: &StandardizedHistory) -> Outcome {
    match sh.adt() {
        AdtKind::Set => set::check_set(sh),
        AdtKind::Stack => stack::check_stack(sh),
        AdtKind::Queue => queue::check_queue(sh),
        AdtKind::PriorityQueue => pqueue::check_pqueue(sh),
        AdtKind::Register => unreachable!("register histories are never standardized"),
    }
}

/// Validates, standardizes and checks a history. The reported time covers
/// standardization and checking only.
pub fn check(h: &History) -> Result<CheckReport, CheckError> {
    validate_well_formed(h).map_err(CheckError::IllFormed)?;
    validate_unambiguous(h).map_err(CheckError::Ambiguous)?;
    // Leave room for the removes standardization may append, so it never reallocates.
    let adds = h.ops.iter().filter(|o| o.method == h.adt.add_method()).count();
    let mut ops = Vec::with_capacity(h.len() + adds);
    ops.extend_from_slice(&h.ops);
    let input = History { adt: h.adt, ops };
    let mut keep = None;
    let started = Instant::now();
    let mut report = CheckReport {
        adt: h.adt,
        verdict: Verdict::Linearizable,
        stage: Stage::Checker,
        removal_order: Vec::new(),
        elapsed: Default::default(),
        n_ops: h.len(),
        detail: None,
    };
    if h.adt == AdtKind::Register {
        match register::check_register(&input) {
            Ok(out) => {
                let ids = h.values().into_iter().collect::<Vec<_>>();
                report.verdict = out.verdict;
                report.removal_order = out.removal_order.into_iter().map(|v| ids[v]).collect();
            }
            Err(e) => {
                report.verdict = Verdict::NonLinearizable;
                report.detail = Some(e.to_string());
            }
        }
    } else {
        match standardize(input) {
            Ok(sh) => {
                let out = check_standardized(&sh);
                report.verdict = out.verdict;
                report.removal_order = out.removal_order.into_iter().map(|v| sh.index.id(v)).collect();
                keep = Some(sh);
            }
            Err(e) => {
                report.verdict = Verdict::NonLinearizable;
                report.stage = Stage::Standardization;
                report.detail = Some(e.to_string());
            }
        }
    }
    report.elapsed = started.elapsed();
    drop(keep);
    Ok(report)
}
