//! Queues: repeatedly find a value that could be at the front of the queue, i.e. it
//! can be enqueued before everything else and dequeued (and peeked) before any other
//! value is observed.

use std::collections::BTreeSet;

use crate::framework::{check_lin, LinPProvider, Outcome};
use crate::model::{Method, Time};
use crate::standardize::StandardizedHistory;

/// `(min res, max inv)` over the peek and deq ops of each value.
fn peek_deq_bounds(sh: &StandardizedHistory, v: usize) -> (Time, Time) {
    let ops = sh.index.ops_of(v).iter().map(|&p| sh.op(p)).filter(|o| o.method != Method::Enq);
    let lo = ops.clone().map(|o| o.res).min().expect("standardized values are dequeued");
    let hi = ops.map(|o| o.inv).max().unwrap();
    (lo, hi)
}

pub struct QueueChecker {
    alive: Vec<bool>,
    seen_enq: Vec<bool>,
    seen_pd: Vec<bool>,
    /// Enqueue events ordered by time, responses before invocations on ties.
    enq_events: Vec<(Time, bool, usize)>,
    enq_cursor: usize,
    min_res: BTreeSet<(Time, usize)>,
    max_inv: Vec<(Time, usize)>,
    max_inv_cursor: usize,
    max_inv_of: Vec<Time>,
    max_inv_taken: Vec<bool>,
}

impl QueueChecker {
    pub fn new(sh: &StandardizedHistory) -> Self {
        let m = sh.index.len();
        let mut enq_events = Vec::with_capacity(2 * m);
        let mut min_res = BTreeSet::new();
        let mut max_inv = Vec::with_capacity(m);
        let mut max_inv_of = Vec::with_capacity(m);
        for v in 0..m {
            let enq = sh.op(sh.index.add_of(v).expect("standardized values are enqueued"));
            // `false` sorts first: a response at time t precedes an invocation at t.
            enq_events.push((enq.res, false, v));
            enq_events.push((enq.inv, true, v));
            let (lo, hi) = peek_deq_bounds(sh, v);
            min_res.insert((lo, v));
            max_inv.push((hi, v));
            max_inv_of.push(hi);
        }
        enq_events.sort_unstable();
        max_inv.sort_unstable();
        QueueChecker {
            alive: vec![true; m],
            seen_enq: vec![false; m],
            seen_pd: vec![false; m],
            enq_events,
            enq_cursor: 0,
            min_res,
            max_inv,
            max_inv_cursor: 0,
            max_inv_of,
            max_inv_taken: vec![false; m],
        }
    }

    /// Next value whose enqueue can precede every other remaining enqueue, or `None`
    /// once a remaining enqueue has responded before the next invocation.
    pub fn next_front_enq(&mut self) -> Option<usize> {
        while let Some(&(_, is_inv, v)) = self.enq_events.get(self.enq_cursor) {
            if !is_inv {
                if self.alive[v] {
                    return None;
                }
                self.enq_cursor += 1;
                continue;
            }
            self.enq_cursor += 1;
            return Some(v);
        }
        None
    }

    fn first_untaken_max_inv(&mut self) -> Option<(Time, usize)> {
        while let Some(&(t, v)) = self.max_inv.get(self.max_inv_cursor) {
            if !self.max_inv_taken[v] {
                return Some((t, v));
            }
            self.max_inv_cursor += 1;
        }
        None
    }

    fn take(&mut self, v: usize) -> usize {
        self.max_inv_taken[v] = true;
        v
    }

    /// Next value whose peeks and deq can all precede every other remaining value's
    /// peeks and deqs: its latest invocation comes before their earliest response.
    pub fn next_front_peek_deq(&mut self) -> Option<usize> {
        while let Some(&(t, v)) = self.min_res.first() {
            if self.alive[v] {
                break;
            }
            self.min_res.remove(&(t, v));
        }
        let &(first_t, first_v) = self.min_res.first()?;
        let (max_t, max_v) = self.first_untaken_max_inv()?;
        if max_t < first_t {
            return Some(self.take(max_v));
        }
        if self.max_inv_taken[first_v] {
            return None;
        }
        let second = loop {
            match self.min_res.iter().nth(1).copied() {
                Some((t, u)) if !self.alive[u] => {
                    self.min_res.remove(&(t, u));
                }
                other => break other,
            }
        };
        match second {
            None => Some(self.take(first_v)),
            Some((second_t, _)) if self.max_inv_of[first_v] < second_t => Some(self.take(first_v)),
            _ => None,
        }
    }

    pub fn get_linp_queue(&mut self) -> Option<usize> {
        loop {
            let a = self.next_front_enq();
            if let Some(v) = a {
                self.seen_enq[v] = true;
                if self.seen_pd[v] {
                    return Some(v);
                }
            }
            let b = self.next_front_peek_deq();
            if let Some(v) = b {
                self.seen_pd[v] = true;
                if self.seen_enq[v] {
                    return Some(v);
                }
            }
            if a.is_none() && b.is_none() {
                return None;
            }
        }
    }
}

impl LinPProvider for QueueChecker {
    fn next(&mut self) -> Option<usize> {
        self.get_linp_queue()
    }

    fn notify_removed(&mut self, v: usize) {
        self.alive[v] = false;
    }
}

pub fn check_queue(sh: &StandardizedHistory) -> Outcome {
    let mut checker = QueueChecker::new(sh);
    check_lin(sh.index.len(), &mut checker).expect("queue checker returns each value once")
}

/// Reference predicate: `v`'s enqueue is not preceded by another alive enqueue, and
/// every peek/deq of `v` is invoked before every peek/deq of the other alive values
/// responds.
pub fn is_potential_front(sh: &StandardizedHistory, alive: &[bool], v: usize) -> bool {
    let enq = |u: usize| sh.op(sh.index.add_of(u).unwrap());
    let (_, hi) = peek_deq_bounds(sh, v);
    (0..sh.index.len()).filter(|&u| u != v && alive[u]).all(|u| {
        let enq_ok = enq(v).inv < enq(u).res;
        let (lo_u, _) = peek_deq_bounds(sh, u);
        enq_ok && hi < lo_u
    })
}

pub fn get_linp_queue_naive(sh: &StandardizedHistory, alive: &[bool]) -> Option<usize> {
    (0..sh.index.len()).find(|&v| alive[v] && is_potential_front(sh, alive, v))
}

pub fn check_queue_naive(sh: &StandardizedHistory) -> Outcome {
    struct Naive<'a>(&'a StandardizedHistory, Vec<bool>);
    impl LinPProvider for Naive<'_> {
        fn next(&mut self) -> Option<usize> {
            get_linp_queue_naive(self.0, &self.1)
        }
        fn notify_removed(&mut self, v: usize) {
            self.1[v] = false;
        }
    }
    let mut p = Naive(sh, vec![true; sh.index.len()]);
    check_lin(sh.index.len(), &mut p).expect("naive queue provider returns alive values")
}
