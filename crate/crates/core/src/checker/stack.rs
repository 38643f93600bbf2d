//! Stacks: repeatedly find a value that could sit at the bottom of the stack for
//! its whole lifetime, i.e. every op of it has an instant outside all other
//! values' critical intervals.
//!
//! Partitions are handed out in order of how many critical intervals block them.
//! A partition blocked by nothing serves every operation spanning it; one blocked by
//! a single value `u` serves every operation of `u`, and becomes free for all once
//! `u` is removed.

use std::collections::VecDeque;
use std::ops::Range;

use crate::framework::{check_lin, LinPProvider, Outcome};
use crate::model::Time;
use crate::standardize::StandardizedHistory;
use crate::structures::{MinTagSegTree, OpIntervalTree, OpIntervalTreeBuilder, PartitionIndex};

/// A partition together with the values whose operations it may serve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Permissive {
    /// Blocked by no remaining value.
    Free(usize),
    /// Blocked only by the given value.
    ForValue(usize, usize),
}

pub struct StackChecker {
    ops: OpIntervalTree,
    weights: MinTagSegTree,
    critical: Vec<Range<usize>>,
    waiting: Vec<Vec<usize>>,
    pending: VecDeque<usize>,
    pot_bot: VecDeque<usize>,
    value_of: Vec<usize>,
}

/// `(min res, max inv)` over all ops of each value.
fn critical_bounds(sh: &StandardizedHistory, v: usize) -> (Time, Time) {
    let ops = sh.index.ops_of(v).iter().map(|&p| sh.op(p));
    let lo = ops.clone().map(|o| o.res).min().expect("values have ops");
    let hi = ops.map(|o| o.inv).max().unwrap();
    (lo, hi)
}

impl StackChecker {
    pub fn new(sh: &StandardizedHistory) -> Self {
        let parts = PartitionIndex::build(&sh.history);
        let m = sh.index.len();
        let n = sh.history.len();
        let mut builder = OpIntervalTreeBuilder::new(parts.len(), m, n);
        let mut value_of = vec![usize::MAX; n];
        for (pos, o) in sh.history.ops.iter().enumerate() {
            let v = sh.index.value_of(pos).expect("standardized histories have no empty ops");
            value_of[pos] = v;
            builder.insert(pos, v, parts.op_span_to_partition_range(o));
        }
        let mut weights = MinTagSegTree::new(parts.len());
        let critical: Vec<Range<usize>> = (0..m)
            .map(|v| {
                let (lo, hi) = critical_bounds(sh, v);
                let r = parts.closed_range(lo, hi);
                weights.update_range(r.clone(), 1, v as i64);
                r
            })
            .collect();
        StackChecker {
            ops: builder.build(),
            weights,
            critical,
            waiting: vec![Vec::new(); m],
            pending: VecDeque::new(),
            pot_bot: VecDeque::new(),
            value_of,
        }
    }

    /// Next partition worth exploring, or `None` when every remaining partition is
    /// blocked by at least two values.
    pub fn get_permissive(&mut self) -> Option<Permissive> {
        if let Some(p) = self.pending.pop_front() {
            return Some(Permissive::Free(p));
        }
        let best = self.weights.query_min()?;
        self.weights.disable_point(best.pos);
        match best.weight {
            0 => Some(Permissive::Free(best.pos)),
            1 => {
                let u = best.tag as usize;
                self.waiting[u].push(best.pos);
                Some(Permissive::ForValue(best.pos, u))
            }
            _ => None,
        }
    }

    fn remove_subhistory(&mut self, v: usize) {
        self.weights.update_range(self.critical[v].clone(), -1, -(v as i64));
        self.pending.extend(self.waiting[v].drain(..));
    }

    pub fn get_linp_stack(&mut self) -> Option<usize> {
        while self.pot_bot.is_empty() {
            let (p, filter) = match self.get_permissive()? {
                Permissive::Free(p) => (p, None),
                Permissive::ForValue(p, u) => (p, Some(u)),
            };
            for op in self.ops.search(p, filter) {
                let v = self.value_of[op];
                self.ops.remove(op, v).expect("search returns live ops");
                if !self.ops.contains(v) {
                    self.remove_subhistory(v);
                    self.pot_bot.push_back(v);
                }
            }
        }
        self.pot_bot.pop_front()
    }
}

impl LinPProvider for StackChecker {
    fn next(&mut self) -> Option<usize> {
        self.get_linp_stack()
    }
}

pub fn check_stack(sh: &StandardizedHistory) -> Outcome {
    let mut checker = StackChecker::new(sh);
    check_lin(sh.index.len(), &mut checker).expect("stack checker returns each value once")
}

/// Whether `v` could be the bottom of the residual stack made of the `alive` values:
/// each op of `v` must leave part of its window uncovered by the other values'
/// closed critical intervals.
pub fn is_potentially_bottom(sh: &StandardizedHistory, alive: &[bool], v: usize) -> bool {
    let mut blocked: Vec<(Time, Time)> = (0..sh.index.len())
        .filter(|&u| u != v && alive[u])
        .map(|u| critical_bounds(sh, u))
        .filter(|&(lo, hi)| lo < hi)
        .collect();
    blocked.sort_unstable();
    let mut merged: Vec<(Time, Time)> = Vec::new();
    for (lo, hi) in blocked {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    sh.index.ops_of(v).iter().map(|&p| sh.op(p)).all(|o| !merged.iter().any(|&(lo, hi)| lo <= o.inv && o.res <= hi))
}

/// Reference implementation: the smallest alive potentially-bottom value.
pub fn get_linp_stack_naive(sh: &StandardizedHistory, alive: &[bool]) -> Option<usize> {
    (0..sh.index.len()).find(|&v| alive[v] && is_potentially_bottom(sh, alive, v))
}

pub fn check_stack_naive(sh: &StandardizedHistory) -> Outcome {
    struct Naive<'a>(&'a StandardizedHistory, Vec<bool>);
    impl LinPProvider for Naive<'_> {
        fn next(&mut self) -> Option<usize> {
            get_linp_stack_naive(self.0, &self.1)
        }
        fn notify_removed(&mut self, v: usize) {
            self.1[v] = false;
        }
    }
    let mut p = Naive(sh, vec![true; sh.index.len()]);
    check_lin(sh.index.len(), &mut p).expect("naive stack provider returns alive values")
}
