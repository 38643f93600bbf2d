use std::ops::Range;

use super::mintag::right;

/// Range add with range minimum; counts how many intervals cover each partition.
/// Same preorder node layout as [`super::MinTagSegTree`].
#[derive(Debug, Clone)]
pub struct CoverSegTree {
    n: usize,
    /// Per node: subtree minimum including the node's own pending add, and that add.
    node: Vec<(i32, i32)>,
}

impl CoverSegTree {
    pub fn new(n: usize) -> Self {
        CoverSegTree { n, node: vec![(0, 0); (2 * n).max(1)] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_range(&mut self, range: Range<usize>, delta: i32) {
        assert!(range.end <= self.n, "range {range:?} exceeds {} leaves", self.n);
        if !range.is_empty() {
            self.add(0, 0, self.n, &range, delta);
        }
    }

    fn add(&mut self, k: usize, l: usize, r: usize, q: &Range<usize>, delta: i32) {
        if q.end <= l || r <= q.start {
            return;
        }
        if q.start <= l && r <= q.end {
            self.node[k].0 += delta;
            self.node[k].1 += delta;
            return;
        }
        let m = (l + r) / 2;
        let rk = right(k, l, m);
        self.add(k + 1, l, m, q, delta);
        self.add(rk, m, r, q, delta);
        self.node[k].0 = self.node[k].1 + self.node[k + 1].0.min(self.node[rk].0);
    }

    /// Minimum over `range`; `None` for an empty range.
    pub fn min_in_range(&self, range: Range<usize>) -> Option<i32> {
        assert!(range.end <= self.n, "range {range:?} exceeds {} leaves", self.n);
        (!range.is_empty()).then(|| self.query(0, 0, self.n, &range))
    }

    fn query(&self, k: usize, l: usize, r: usize, q: &Range<usize>) -> i32 {
        if q.start <= l && r <= q.end {
            return self.node[k].0;
        }
        let m = (l + r) / 2;
        let mut best = i32::MAX;
        if q.start < m {
            best = best.min(self.query(k + 1, l, m, q));
        }
        if m < q.end {
            best = best.min(self.query(right(k, l, m), m, r, q));
        }
        self.node[k].1 + best
    }
}
