//! Rewrites a container history into an equi-linearizable one that is well-matched,
//! compliant and free of `empty` operations, or reports that no rewrite can exist
//! because the history is already non-linearizable.

use serde::Serialize;
use thiserror::Error;

use crate::index::{number_values, ValueIndex};
use crate::model::{AdtKind, History, Method, Operation, Process, Time, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardizedHistory {
    pub history: History,
    pub index: ValueIndex,
    /// Ids of the removes appended for values that were never removed.
    pub synthetic_ops: Vec<u64>,
}

impl StandardizedHistory {
    pub fn adt(&self) -> AdtKind {
        self.history.adt
    }

    pub fn op(&self, pos: usize) -> &Operation {
        &self.history.ops[pos]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardizeStage {
    Compliance,
    EmptyCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason} (op {op})")]
pub struct NonLinearizable {
    pub stage: StandardizeStage,
    pub op: u64,
    pub reason: String,
}

/// Set observations are folded into the four core methods: `contains` reporting
/// presence behaves exactly like a failing insert, absence like a failing delete.
pub fn rewrite_contains(mut h: History) -> History {
    for o in &mut h.ops {
        o.method = match o.method {
            Method::ContainsTrue => Method::InsertFail,
            Method::ContainsFalse => Method::DeleteFail,
            m => m,
        };
    }
    h
}

/// Appends a remove for every value that is added but never removed.
///
/// All appended removes share the window `[T+1, T+2]`, where `T` is the latest
/// response, each on its own fresh process, so they impose no order among themselves.
pub fn complete_matches(h: History) -> (History, Vec<u64>) {
    let (ids, op_value) = number_values(&h);
    let (h, _, added) = complete_numbered(h, &ids, op_value);
    (h, added)
}

/// `complete_matches` over a precomputed numbering, which is extended to cover the
/// appended operations.
fn complete_numbered(
    mut h: History,
    ids: &[u64],
    mut op_value: Vec<Option<u32>>,
) -> (History, Vec<Option<u32>>, Vec<u64>) {
    let Some(remove) = h.adt.remove_method() else {
        return (h, op_value, Vec::new());
    };
    let add = h.adt.add_method();
    let mut has_add = vec![false; ids.len()];
    let mut has_remove = vec![false; ids.len()];
    for (o, v) in h.ops.iter().zip(&op_value) {
        if let Some(v) = *v {
            if o.method == add {
                has_add[v as usize] = true;
            } else if o.method == remove {
                has_remove[v as usize] = true;
            }
        }
    }
    let unmatched: Vec<usize> = (0..ids.len()).filter(|&v| has_add[v] && !has_remove[v]).collect();
    if unmatched.is_empty() {
        return (h, op_value, Vec::new());
    }
    let t = h.max_res().expect("a value implies an operation");
    let mut prefix = String::from("synthetic");
    while h.ops.iter().any(|o| o.process.as_str().starts_with(prefix.as_str())) {
        prefix.insert(0, '_');
    }
    let mut next_id = h.max_op_id();
    let mut added = Vec::with_capacity(unmatched.len());
    h.ops.reserve(unmatched.len());
    for (k, v) in unmatched.into_iter().enumerate() {
        next_id += 1;
        let process = Process::new(&format!("{prefix}-{}", k + 1));
        h.ops.push(Operation {
            id: next_id,
            process,
            method: remove,
            value: Value::Id(ids[v]),
            inv: t + 1,
            res: t + 2,
        });
        op_value.push(Some(v as u32));
        added.push(next_id);
    }
    (h, op_value, added)
}

/// Shrinks windows so that, per value, every operation lies within the add and
/// remove windows, the add responds before any other op of the value responds, and
/// the remove is invoked after every other op of the value is invoked.
pub fn enforce_compliance(mut h: History) -> Result<History, NonLinearizable> {
    let index = ValueIndex::build(&h);
    comply(&mut h, &index)?;
    Ok(h)
}

fn comply(h: &mut History, index: &ValueIndex) -> Result<(), NonLinearizable> {
    // Three sweeps in history order; per-value state lives in small dense arrays,
    // which keeps memory access mostly sequential on large histories.
    let set = h.adt == AdtKind::Set;
    let m = index.len();
    let add = h.adt.add_method();
    let remove = h.adt.remove_method();
    let values = index.op_values();
    let mut lo = vec![Time::MIN; m];
    let mut hi = vec![Time::MAX; m];
    for (o, v) in h.ops.iter().zip(values) {
        if let Some(v) = *v {
            if o.method == add {
                lo[v as usize] = o.inv;
            } else if Some(o.method) == remove {
                hi[v as usize] = o.res;
            }
        }
    }
    let mut min_res = hi.clone();
    let mut max_inv = lo.clone();
    for (o, v) in h.ops.iter_mut().zip(values) {
        let Some(v) = v.map(|v| v as usize) else {
            continue;
        };
        if lo[v] == Time::MIN || o.method == add || Some(o.method) == remove {
            continue;
        }
        if set && matches!(o.method, Method::DeleteFail | Method::ContainsFalse) {
            continue;
        }
        o.inv = o.inv.max(lo[v]);
        o.res = o.res.min(hi[v]);
        min_res[v] = min_res[v].min(o.res);
        max_inv[v] = max_inv[v].max(o.inv);
    }
    for (o, v) in h.ops.iter_mut().zip(values) {
        let Some(v) = v.map(|v| v as usize) else {
            continue;
        };
        if lo[v] == Time::MIN {
            continue;
        }
        if o.method == add {
            o.res = o.res.min(min_res[v]);
        } else if Some(o.method) == remove {
            o.inv = o.inv.max(max_inv[v]);
        }
    }
    if let Some(o) = h.ops.iter().find(|o| o.inv >= o.res) {
        return Err(NonLinearizable {
            stage: StandardizeStage::Compliance,
            op: o.id,
            reason: format!("window of {} {} closes once restricted to its value's lifetime", o.method, o.value),
        });
    }
    Ok(())
}

/// Union of the closed intervals `[res(add_v), inv(remove_v)]`: instants at which
/// some value is certainly present in the container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadZone(Vec<(Time, Time)>);

impl BadZone {
    pub fn build(h: &History) -> Self {
        Self::from_index(h, &ValueIndex::build(h))
    }

    fn from_index(h: &History, index: &ValueIndex) -> Self {
        let mut spans: Vec<(Time, Time)> = (0..index.len())
            .filter_map(|v| {
                let lo = h.ops[index.add_of(v)?].res;
                let hi = h.ops[index.remove_of(v)?].inv;
                (lo <= hi).then_some((lo, hi))
            })
            .collect();
        spans.sort_unstable();
        let mut merged: Vec<(Time, Time)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        BadZone(merged)
    }

    pub fn intervals(&self) -> &[(Time, Time)] {
        &self.0
    }

    /// Whether the closed interval `[lo, hi]` lies inside the zone.
    pub fn covers(&self, lo: Time, hi: Time) -> bool {
        let k = self.0.partition_point(|&(a, _)| a <= lo);
        k > 0 && self.0[k - 1].1 >= hi
    }
}

/// Drops `empty` operations once each has an instant at which no value is present.
pub fn strip_empty(h: History) -> Result<History, NonLinearizable> {
    let index = ValueIndex::build(&h);
    strip_with(h, &index)
}

fn strip_with(mut h: History, index: &ValueIndex) -> Result<History, NonLinearizable> {
    if !h.ops.iter().any(|o| o.method == Method::Empty) {
        return Ok(h);
    }
    let zone = BadZone::from_index(&h, index);
    if let Some(o) = h.ops.iter().find(|o| o.method == Method::Empty && zone.covers(o.inv, o.res)) {
        return Err(NonLinearizable {
            stage: StandardizeStage::EmptyCheck,
            op: o.id,
            reason: "empty observed while some value was certainly present".to_string(),
        });
    }
    h.ops.retain(|o| o.method != Method::Empty);
    Ok(h)
}

/// Runs the whole pipeline. Register histories have no standard form.
pub fn standardize(h: History) -> Result<StandardizedHistory, NonLinearizable> {
    assert!(h.adt != AdtKind::Register, "register histories are checked without standardization");
    let h = if h.adt == AdtKind::Set { rewrite_contains(h) } else { h };
    let (ids, op_value) = number_values(&h);
    let (mut h, op_value, synthetic_ops) = complete_numbered(h, &ids, op_value);
    let index = ValueIndex::from_numbering(&h, ids, op_value);
    comply(&mut h, &index)?;
    let before = h.len();
    let history = strip_with(h, &index)?;
    let index = if history.len() == before { index } else { ValueIndex::build(&history) };
    Ok(StandardizedHistory { history, index, synthetic_ops })
}
