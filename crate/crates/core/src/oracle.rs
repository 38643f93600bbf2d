//! Exhaustive linearizability search for small histories.
//!
//! A depth-first search over (set of linearized ops, abstract state) pairs. An
//! operation may be linearized next only if it was invoked before every pending
//! operation responded; failed pairs are memoized.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::History;
use crate::seqspec::{AbstractOp, AdtState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_ops: usize,
    pub max_states: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_ops: 20, max_states: 1 << 21 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("history has {n} operations; the exhaustive search is limited to {max}")]
    TooManyOps { n: usize, max: usize },
    #[error("search gave up after exploring {0} states")]
    BudgetExceeded(usize),
}

pub fn is_linearizable_bruteforce(h: &History, budget: OracleBudget) -> Result<bool, OracleError> {
    find_linearization(h, budget).map(|w| w.is_some())
}

/// Returns the op ids of one linearization, in order, if any exists.
pub fn find_linearization(h: &History, budget: OracleBudget) -> Result<Option<Vec<u64>>, OracleError> {
    let n = h.len();
    let max = budget.max_ops.min(64);
    if n > max {
        return Err(OracleError::TooManyOps { n, max });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (h.ops[i].inv, h.ops[i].id));
    let mut search =
        Search { h, order, failed: HashSet::new(), path: Vec::with_capacity(n), max_states: budget.max_states };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let found = search.dfs(0, full, AdtState::initial(h.adt))?;
    Ok(found.then(|| search.path.iter().map(|&i| h.ops[i].id).collect()))
}

struct Search<'a> {
    h: &'a History,
    order: Vec<usize>,
    failed: HashSet<(u64, AdtState)>,
    path: Vec<usize>,
    max_states: usize,
}

impl Search<'_> {
    fn dfs(&mut self, done: u64, full: u64, state: AdtState) -> Result<bool, OracleError> {
        if done == full {
            return Ok(true);
        }
        if self.failed.contains(&(done, state.clone())) {
            return Ok(false);
        }
        let horizon = self
            .order
            .iter()
            .filter(|&&i| done & (1 << i) == 0)
            .map(|&i| self.h.ops[i].res)
            .min()
            .expect("some operation is pending");
        for k in 0..self.order.len() {
            let i = self.order[k];
            let o = &self.h.ops[i];
            if o.inv >= horizon {
                break;
            }
            if done & (1 << i) != 0 {
                continue;
            }
            let mut next = state.clone();
            if !next.apply(self.h.adt, AbstractOp::new(o.method, o.value)) {
                continue;
            }
            self.path.push(i);
            if self.dfs(done | (1 << i), full, next)? {
                return Ok(true);
            }
            self.path.pop();
        }
        self.failed.insert((done, state));
        if self.failed.len() > self.max_states {
            return Err(OracleError::BudgetExceeded(self.failed.len()));
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdtKind, Method, Operation, Value};

    fn h(adt: AdtKind, ops: &[(Method, u64, i64, i64)]) -> History {
        History::new(
            adt,
            ops.iter()
                .enumerate()
                .map(|(i, &(m, v, a, b))| {
                    let value = if m == Method::Empty { Value::Empty } else { Value::Id(v) };
                    Operation::new(i as u64 + 1, format!("p{i}").as_str(), m, value, a, b)
                })
                .collect(),
        )
    }

    #[test]
    fn overlapping_enq_deq() {
        let q = h(AdtKind::Queue, &[(Method::Enq, 3, 1, 3), (Method::Deq, 3, 2, 4)]);
        assert_eq!(find_linearization(&q, OracleBudget::default()).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn register_stale_read() {
        use Method::*;
        let r = h(AdtKind::Register, &[(Write, 1, 1, 2), (Write, 2, 3, 4), (Read, 1, 5, 6), (Read, 2, 7, 8)]);
        assert_eq!(is_linearizable_bruteforce(&r, OracleBudget::default()), Ok(false));
    }

    #[test]
    fn stack_order_violation() {
        use Method::*;
        let s = h(AdtKind::Stack, &[(Push, 1, 1, 2), (Push, 2, 3, 4), (Pop, 1, 5, 6), (Pop, 2, 7, 8)]);
        assert_eq!(is_linearizable_bruteforce(&s, OracleBudget::default()), Ok(false));
    }

    #[test]
    fn budget_limits() {
        let ops: Vec<_> = (0..25).map(|i| (Method::Enq, i + 1, 1, 100)).collect();
        let q = h(AdtKind::Queue, &ops);
        assert_eq!(
            is_linearizable_bruteforce(&q, OracleBudget::default()),
            Err(OracleError::TooManyOps { n: 25, max: 20 })
        );
        let small: Vec<_> =
            (0..12).map(|i| (Method::Enq, i + 1, 1, 100)).chain([(Method::Deq, 99, 101, 102)]).collect();
        let tight = OracleBudget { max_ops: 20, max_states: 50 };
        assert!(matches!(
            is_linearizable_bruteforce(&h(AdtKind::Queue, &small), tight),
            Err(OracleError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn empty_history_is_linearizable() {
        assert_eq!(find_linearization(&h(AdtKind::Set, &[]), OracleBudget::default()).unwrap(), Some(vec![]));
    }
}
