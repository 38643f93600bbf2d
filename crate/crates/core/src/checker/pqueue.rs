//! Priority queues (deq returns the maximum): the smallest remaining value can be
//! removed as long as each of its peeks and deqs has an instant at which no larger
//! value is certainly present. Scanning values from largest to smallest, the
//! critical intervals of larger values accumulate in a coverage tree.

use crate::framework::{check_lin, LinPProvider, Outcome, Verdict};
use crate::model::{Method, Time};
use crate::standardize::StandardizedHistory;
use crate::structures::{CoverSegTree, PartitionIndex};

fn critical_bounds(sh: &StandardizedHistory, v: usize) -> (Time, Time) {
    let ops = sh.index.ops_of(v).iter().map(|&p| sh.op(p));
    let lo = ops.clone().map(|o| o.res).min().expect("values have ops");
    let hi = ops.map(|o| o.inv).max().unwrap();
    (lo, hi)
}

pub fn check_pqueue(sh: &StandardizedHistory) -> Outcome {
    let parts = PartitionIndex::build(&sh.history);
    let mut cover = CoverSegTree::new(parts.len());
    let m = sh.index.len();
    let mut scanned = Vec::with_capacity(m);
    for v in (0..m).rev() {
        let observers = sh.index.ops_of(v).iter().map(|&p| sh.op(p)).filter(|o| o.method != Method::Enq);
        for o in observers {
            if cover.min_in_range(parts.op_span_to_partition_range(o)).unwrap_or(0) > 0 {
                return Outcome { verdict: Verdict::NonLinearizable, removal_order: Vec::new() };
            }
        }
        let (lo, hi) = critical_bounds(sh, v);
        if lo < hi {
            cover.add_range(parts.closed_range(lo, hi), 1);
        }
        scanned.push(v);
    }
    scanned.reverse();
    Outcome { verdict: Verdict::Linearizable, removal_order: scanned }
}

/// Reference predicate: every peek/deq of `v` leaves part of its window outside the
/// closed critical intervals of the larger alive values.
pub fn is_potential_min(sh: &StandardizedHistory, alive: &[bool], v: usize) -> bool {
    let blocked: Vec<(Time, Time)> = (v + 1..sh.index.len())
        .filter(|&u| alive[u])
        .map(|u| critical_bounds(sh, u))
        .filter(|&(lo, hi)| lo < hi)
        .collect();
    let mut times: Vec<Time> = sh.history.ops.iter().flat_map(|o| [o.inv, o.res]).collect();
    times.sort_unstable();
    times.dedup();
    sh.index.ops_of(v).iter().map(|&p| sh.op(p)).filter(|o| o.method != Method::Enq).all(|o| {
        // Midpoints of consecutive event times, doubled to stay integral.
        times
            .windows(2)
            .map(|w| w[0] + w[1])
            .filter(|&t2| 2 * o.inv < t2 && t2 < 2 * o.res)
            .any(|t2| blocked.iter().all(|&(lo, hi)| !(2 * lo <= t2 && t2 <= 2 * hi)))
    })
}

pub fn check_pqueue_naive(sh: &StandardizedHistory) -> Outcome {
    struct Naive<'a>(&'a StandardizedHistory, Vec<bool>);
    impl LinPProvider for Naive<'_> {
        fn next(&mut self) -> Option<usize> {
            let v = (0..self.1.len()).find(|&v| self.1[v])?;
            is_potential_min(self.0, &self.1, v).then_some(v)
        }
        fn notify_removed(&mut self, v: usize) {
            self.1[v] = false;
        }
    }
    let mut p = Naive(sh, vec![true; sh.index.len()]);
    check_lin(sh.index.len(), &mut p).expect("naive priority-queue provider returns alive values")
}
