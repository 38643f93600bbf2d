use std::ops::Range;

/// Weight assigned to disabled leaves; large enough to survive any sequence of
/// decrements a checker performs.
const DISABLED: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinEntry {
    pub pos: usize,
    pub weight: i64,
    pub tag: i64,
}

/// Range add over (weight, tag) pairs with a global arg-min query.
///
/// Each leaf counts the critical intervals covering a partition and sums their
/// value tags, so a leaf of weight 1 names its only blocker. Ties in weight go to
/// the leftmost leaf. Nodes use the preorder layout (left child at `k + 1`, right
/// child after the left subtree), so `n` leaves take `2n - 1` slots.
#[derive(Debug, Clone)]
pub struct MinTagSegTree {
    n: usize,
    node: Vec<MinEntry>,
    lazy: Vec<(i64, i64)>,
}

/// Right child of node `k` covering `[l, r)` split at `m`.
#[inline]
pub(crate) fn right(k: usize, l: usize, m: usize) -> usize {
    k + 2 * (m - l)
}

impl MinTagSegTree {
    pub fn new(n: usize) -> Self {
        let mut tree = MinTagSegTree {
            n,
            node: vec![MinEntry { pos: 0, weight: 0, tag: 0 }; (2 * n).max(1)],
            lazy: vec![(0, 0); (2 * n).max(1)],
        };
        if n > 0 {
            tree.init(0, 0, n);
        }
        tree
    }

    fn init(&mut self, k: usize, l: usize, r: usize) {
        self.node[k].pos = l;
        if r - l > 1 {
            let m = (l + r) / 2;
            self.init(k + 1, l, m);
            self.init(right(k, l, m), m, r);
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn apply(&mut self, k: usize, dw: i64, dt: i64) {
        self.node[k].weight += dw;
        self.node[k].tag += dt;
        self.lazy[k].0 += dw;
        self.lazy[k].1 += dt;
    }

    fn push(&mut self, k: usize, l: usize, m: usize) {
        let (dw, dt) = std::mem::take(&mut self.lazy[k]);
        if dw != 0 || dt != 0 {
            self.apply(k + 1, dw, dt);
            self.apply(right(k, l, m), dw, dt);
        }
    }

    fn pull(&mut self, k: usize, l: usize, m: usize) {
        let (a, b) = (self.node[k + 1], self.node[right(k, l, m)]);
        self.node[k] = if a.weight <= b.weight { a } else { b };
    }

    pub fn update_range(&mut self, range: Range<usize>, dw: i64, dt: i64) {
        assert!(range.end <= self.n, "range {range:?} exceeds {} leaves", self.n);
        if !range.is_empty() {
            self.update(0, 0, self.n, &range, dw, dt);
        }
    }

    fn update(&mut self, k: usize, l: usize, r: usize, q: &Range<usize>, dw: i64, dt: i64) {
        if q.end <= l || r <= q.start {
            return;
        }
        if q.start <= l && r <= q.end {
            self.apply(k, dw, dt);
            return;
        }
        let m = (l + r) / 2;
        self.push(k, l, m);
        self.update(k + 1, l, m, q, dw, dt);
        self.update(right(k, l, m), m, r, q, dw, dt);
        self.pull(k, l, m);
    }

    /// Leftmost leaf of minimum weight, ignoring disabled leaves.
    pub fn query_min(&self) -> Option<MinEntry> {
        let best = self.node[0];
        (self.n > 0 && best.weight < DISABLED / 2).then_some(best)
    }

    pub fn disable_point(&mut self, pos: usize) {
        assert!(pos < self.n);
        self.disable(0, 0, self.n, pos);
    }

    fn disable(&mut self, k: usize, l: usize, r: usize, pos: usize) {
        if r - l == 1 {
            self.node[k].weight = DISABLED;
            return;
        }
        let m = (l + r) / 2;
        self.push(k, l, m);
        if pos < m {
            self.disable(k + 1, l, m, pos);
        } else {
            self.disable(right(k, l, m), m, r, pos);
        }
        self.pull(k, l, m);
    }
}
