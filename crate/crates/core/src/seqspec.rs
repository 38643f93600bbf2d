//! Sequential specifications as labelled transition systems.
//!
//! All three container types keep their contents as a sequence whose tail is the
//! element observed next: a stack pushes onto the tail, a queue enqueues at the
//! head, and a priority queue keeps the sequence sorted so the maximum sits at the tail.

use std::collections::BTreeSet;

use crate::model::{AdtKind, Method, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AbstractOp {
    pub method: Method,
    pub value: Value,
}

impl AbstractOp {
    pub fn new(method: Method, value: Value) -> Self {
        AbstractOp { method, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AdtState {
    /// `None` until the first write.
    Register(Option<u64>),
    Set(BTreeSet<u64>),
    Seq(Vec<u64>),
}

impl AdtState {
    pub fn initial(adt: AdtKind) -> Self {
        match adt {
            AdtKind::Register => AdtState::Register(None),
            AdtKind::Set => AdtState::Set(BTreeSet::new()),
            AdtKind::Stack | AdtKind::Queue | AdtKind::PriorityQueue => AdtState::Seq(Vec::new()),
        }
    }

    /// Applies `op` in place. Returns `false` (leaving the state untouched) when the
    /// sequential type has no transition for it.
    pub fn apply(&mut self, adt: AdtKind, op: AbstractOp) -> bool {
        use Method::*;
        let value = op.value.id();
        match (self, op.method, value) {
            (AdtState::Register(cur), Write, Some(v)) => {
                *cur = Some(v);
                true
            }
            (AdtState::Register(cur), Read, Some(v)) => *cur == Some(v),
            (AdtState::Set(s), InsertOk, Some(v)) => s.insert(v),
            (AdtState::Set(s), DeleteOk, Some(v)) => s.remove(&v),
            (AdtState::Set(s), InsertFail | ContainsTrue, Some(v)) => s.contains(&v),
            (AdtState::Set(s), DeleteFail | ContainsFalse, Some(v)) => !s.contains(&v),
            (AdtState::Seq(s), Empty, None) => s.is_empty(),
            (AdtState::Seq(s), Peek, Some(v)) => s.last() == Some(&v),
            (AdtState::Seq(s), Pop | Deq, Some(v)) => {
                if s.last() == Some(&v) {
                    s.pop();
                    true
                } else {
                    false
                }
            }
            (AdtState::Seq(s), Push, Some(v)) if adt == AdtKind::Stack => {
                s.push(v);
                true
            }
            (AdtState::Seq(s), Enq, Some(v)) if adt == AdtKind::Queue => {
                s.insert(0, v);
                true
            }
            (AdtState::Seq(s), Enq, Some(v)) if adt == AdtKind::PriorityQueue => {
                let at = s.partition_point(|&x| x < v);
                s.insert(at, v);
                true
            }
            _ => false,
        }
    }
}

/// One transition; `None` is the rejecting outcome.
pub fn step(adt: AdtKind, state: &AdtState, op: AbstractOp) -> Option<AdtState> {
    let mut next = state.clone();
    next.apply(adt, op).then_some(next)
}

pub fn is_member(adt: AdtKind, seq: &[AbstractOp]) -> bool {
    let mut state = AdtState::initial(adt);
    seq.iter().all(|&op| state.apply(adt, op))
}

/// Keeps the operations whose value lies in `values`, preserving order.
pub fn project_abstract(seq: &[AbstractOp], values: &BTreeSet<Value>) -> Vec<AbstractOp> {
    seq.iter().copied().filter(|op| values.contains(&op.value)).collect()
}
