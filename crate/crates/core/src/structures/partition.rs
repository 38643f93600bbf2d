use std::ops::Range;

use crate::model::{History, Operation, Time};

/// Partition `j` is the open gap `(e[j-1], e[j])` between sorted distinct event
/// times, with `e[-1] = -inf` and `e[k] = +inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionIndex {
    times: Vec<Time>,
    /// When times are dense enough: `below[t - base]` counts the times `< t`, for
    /// `t` in `base..=base + below.len() - 1`.
    below: Vec<u32>,
    base: Time,
}

/// `[lo, hi]` with `lo` the earliest response and `hi` the latest invocation among a
/// value's operations. Nonempty only when `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalInterval {
    pub lo: Time,
    pub hi: Time,
}

impl PartitionIndex {
    pub fn from_times(times: impl IntoIterator<Item = Time>) -> Self {
        let mut times: Vec<Time> = times.into_iter().collect();
        let (Some(&lo), Some(&hi)) = (times.iter().min(), times.iter().max()) else {
            return PartitionIndex { times, below: Vec::new(), base: 0 };
        };
        let span = (hi as i128 - lo as i128) as u128;
        if span > 4 * times.len() as u128 + 64 || times.len() >= u32::MAX as usize {
            times.sort_unstable();
            times.dedup();
            return PartitionIndex { times, below: Vec::new(), base: 0 };
        }
        // Counting sort over the dense range, keeping the prefix counts for lookups.
        let mut below = vec![0u32; span as usize + 2];
        for &t in &times {
            below[(t - lo) as usize + 1] = 1;
        }
        times.clear();
        let mut acc = 0;
        for (i, slot) in below.iter_mut().enumerate() {
            if *slot == 1 {
                times.push(lo + i as Time - 1);
            }
            acc += *slot;
            *slot = acc;
        }
        PartitionIndex { times, below, base: lo }
    }

    /// Number of distinct times `< t`.
    fn count_below(&self, t: Time) -> usize {
        if self.below.is_empty() {
            return self.times.partition_point(|&x| x < t);
        }
        if t <= self.base {
            0
        } else if t - self.base >= self.below.len() as Time {
            self.times.len()
        } else {
            self.below[(t - self.base) as usize] as usize
        }
    }

    pub fn build(h: &History) -> Self {
        Self::from_times(h.ops.iter().flat_map(|o| [o.inv, o.res]))
    }

    /// Number of partitions, one more than the number of distinct times.
    pub fn len(&self) -> usize {
        self.times.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    /// Partitions lying entirely within the closed interval `[lo, hi]`.
    pub fn closed_range(&self, lo: Time, hi: Time) -> Range<usize> {
        let start = self.count_below(lo) + 1;
        let end = self.count_below(hi.saturating_add(1));
        start..end.max(start)
    }

    pub fn interval_to_partition_range(&self, ci: CriticalInterval) -> Range<usize> {
        self.closed_range(ci.lo, ci.hi)
    }

    /// Partitions strictly inside an operation's window.
    pub fn op_span_to_partition_range(&self, o: &Operation) -> Range<usize> {
        self.closed_range(o.inv, o.res)
    }

    /// Endpoints of partition `j`; `None` stands for an infinite end.
    pub fn bounds(&self, j: usize) -> (Option<Time>, Option<Time>) {
        let left = j.checked_sub(1).map(|i| self.times[i]);
        (left, self.times.get(j).copied())
    }
}
