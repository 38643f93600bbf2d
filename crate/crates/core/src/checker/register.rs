//! Registers: a value can be peeled off when its write/read cluster can be placed
//! without colliding with the clusters that other values are forced to occupy.

use crate::framework::{check_lin, LinPProvider, Outcome};
use crate::index::ValueIndex;
use crate::model::{History, Method, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Some op responds no later than another op of the value is invoked, so the
    /// value must stay in the register over `[min_res, max_inv]`. Windows are open,
    /// so `min_res == max_inv` belongs here: the two ops share no instant.
    Forward,
    /// All ops of the value share a common instant in `(max_inv, min_res)`.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterValueSummary {
    pub value: u64,
    pub write: usize,
    pub reads: Vec<usize>,
    pub min_res: Time,
    pub max_inv: Time,
    pub direction: Direction,
    /// Every read responds after the write is invoked.
    pub reads_follow_write: bool,
}

impl RegisterValueSummary {
    /// The closed interval associated with the value: `[min_res, max_inv]` for
    /// forward values, `[max_inv, min_res]` for backward ones.
    pub fn interval(&self) -> (Time, Time) {
        match self.direction {
            Direction::Forward => (self.min_res, self.max_inv),
            Direction::Backward => (self.max_inv, self.min_res),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("value {0} is read but never written")]
pub struct UnwrittenRead(pub u64);

/// Per-value summaries in ascending value order (matching `ValueIndex` numbering).
pub fn summarize(h: &History) -> Result<Vec<RegisterValueSummary>, UnwrittenRead> {
    let index = ValueIndex::build(h);
    (0..index.len())
        .map(|v| {
            let write = index.add_of(v).ok_or(UnwrittenRead(index.id(v)))?;
            let ops = index.ops_of(v);
            let reads: Vec<usize> = ops.iter().copied().filter(|&p| h.ops[p].method == Method::Read).collect();
            let min_res = ops.iter().map(|&p| h.ops[p].res).min().unwrap();
            let max_inv = ops.iter().map(|&p| h.ops[p].inv).max().unwrap();
            let w_inv = h.ops[write].inv;
            Ok(RegisterValueSummary {
                value: index.id(v),
                write,
                reads_follow_write: reads.iter().all(|&r| w_inv < h.ops[r].res),
                reads,
                min_res,
                max_inv,
                direction: if min_res <= max_inv { Direction::Forward } else { Direction::Backward },
            })
        })
        .collect()
}

fn contains(outer: (Time, Time), inner: (Time, Time)) -> bool {
    outer.0 <= inner.0 && inner.1 <= outer.1
}

fn intersects(a: (Time, Time), b: (Time, Time)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Whether value `v` can be removed from the residual given by `alive`.
pub fn qualifies(summaries: &[RegisterValueSummary], alive: &[bool], v: usize) -> bool {
    let s = &summaries[v];
    if !s.reads_follow_write {
        return false;
    }
    let iv = s.interval();
    let others = summaries.iter().enumerate().filter(|&(u, _)| u != v && alive[u]).map(|(_, o)| o);
    match s.direction {
        Direction::Forward => others.into_iter().all(|o| match o.direction {
            Direction::Forward => !intersects(iv, o.interval()),
            Direction::Backward => !contains(iv, o.interval()),
        }),
        Direction::Backward => {
            others.into_iter().all(|o| o.direction == Direction::Backward || !contains(o.interval(), iv))
        }
    }
}

/// Smallest removable alive value, if any.
pub fn get_linp_register(summaries: &[RegisterValueSummary], alive: &[bool]) -> Option<usize> {
    (0..summaries.len()).find(|&v| alive[v] && qualifies(summaries, alive, v))
}

struct RegisterProvider {
    summaries: Vec<RegisterValueSummary>,
    alive: Vec<bool>,
}

impl LinPProvider for RegisterProvider {
    fn next(&mut self) -> Option<usize> {
        get_linp_register(&self.summaries, &self.alive)
    }

    fn notify_removed(&mut self, v: usize) {
        self.alive[v] = false;
    }
}

/// Decides a well-formed, unambiguous register history. Removal order is in dense
/// value order; a read of an unwritten value is immediately non-linearizable.
pub fn check_register(h: &History) -> Result<Outcome, UnwrittenRead> {
    let summaries = summarize(h)?;
    let n = summaries.len();
    let mut provider = RegisterProvider { summaries, alive: vec![true; n] };
    Ok(check_lin(n, &mut provider).expect("provider only returns alive values"))
}
