//! The generic decrease-and-conquer loop: repeatedly ask a provider for a value whose
//! removal preserves linearizability, until the history is empty or none exists.

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::model::AdtKind;

/// Supplies removable values (dense indices) for the residual history.
pub trait LinPProvider {
    /// A removable value of the current residual, or `None` when there is none.
    fn next(&mut self) -> Option<usize>;

    /// Called after the framework removes `v` from the residual.
    fn notify_removed(&mut self, _v: usize) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Linearizable,
    NonLinearizable,
}

impl Verdict {
    pub fn from_bool(linearizable: bool) -> Self {
        if linearizable {
            Verdict::Linearizable
        } else {
            Verdict::NonLinearizable
        }
    }

    pub fn is_linearizable(self) -> bool {
        self == Verdict::Linearizable
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Linearizable => "linearizable",
            Verdict::NonLinearizable => "non_linearizable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Validation,
    Standardization,
    Checker,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("provider returned value {value}, which is {problem}")]
pub struct ProtocolViolation {
    pub value: usize,
    pub problem: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    /// Dense values, in removal order.
    pub removal_order: Vec<usize>,
}

pub fn check_lin<P: LinPProvider>(n_values: usize, provider: &mut P) -> Result<Outcome, ProtocolViolation> {
    let mut alive = vec![true; n_values];
    let mut removal_order = Vec::with_capacity(n_values);
    while removal_order.len() < n_values {
        let Some(v) = provider.next() else {
            return Ok(Outcome { verdict: Verdict::NonLinearizable, removal_order });
        };
        match alive.get_mut(v) {
            None => return Err(ProtocolViolation { value: v, problem: "out of range" }),
            Some(false) => return Err(ProtocolViolation { value: v, problem: "already removed" }),
            Some(a) => *a = false,
        }
        removal_order.push(v);
        provider.notify_removed(v);
    }
    Ok(Outcome { verdict: Verdict::Linearizable, removal_order })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub adt: AdtKind,
    pub verdict: Verdict,
    pub stage: Stage,
    /// Original value ids in the order they were peeled off.
    pub removal_order: Vec<u64>,
    pub elapsed: Duration,
    pub n_ops: usize,
    pub detail: Option<String>,
}
