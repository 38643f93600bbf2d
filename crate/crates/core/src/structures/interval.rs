use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operation {0} is not stored in the tree")]
pub struct UnknownOp(pub usize);

/// Collects operation spans (as partition ranges) before freezing them into an
/// [`OpIntervalTree`].
#[derive(Debug, Clone)]
pub struct OpIntervalTreeBuilder {
    n_partitions: usize,
    n_values: usize,
    n_ops: usize,
    items: Vec<Item>,
}

#[derive(Debug, Clone, Copy)]
struct Item {
    op: u32,
    value: u32,
    start: u32,
    end: u32,
}

impl OpIntervalTreeBuilder {
    pub fn new(n_partitions: usize, n_values: usize, n_ops: usize) -> Self {
        assert!(n_partitions < u32::MAX as usize && n_ops < u32::MAX as usize);
        OpIntervalTreeBuilder { n_partitions, n_values, n_ops, items: Vec::new() }
    }

    /// Stores operation `op` of value `value` spanning `span` (nonempty).
    pub fn insert(&mut self, op: usize, value: usize, span: Range<usize>) {
        assert!(op < self.n_ops && value < self.n_values);
        assert!(!span.is_empty() && span.end <= self.n_partitions, "bad span {span:?}");
        self.items.push(Item { op: op as u32, value: value as u32, start: span.start as u32, end: span.end as u32 });
    }

    pub fn build(self) -> OpIntervalTree {
        let mut alive = vec![false; self.n_ops];
        let mut live = vec![0u32; self.n_values];
        for it in &self.items {
            assert!(!alive[it.op as usize], "operation {} inserted twice", it.op);
            alive[it.op as usize] = true;
            live[it.value as usize] += 1;
        }

        let global = Forest::build(
            vec![TreeMeta { leaves: self.n_partitions as u32, node_base: 0, bounds: None }],
            Vec::new(),
            self.items.iter().map(|it| (0usize, it.op, it.start, it.end)).collect(),
        );

        // Group items by value with a counting sort, then give each value a tree over
        // its own compressed endpoints.
        let mut first = vec![0usize; self.n_values + 1];
        for it in &self.items {
            first[it.value as usize + 1] += 1;
        }
        for v in 0..self.n_values {
            first[v + 1] += first[v];
        }
        let mut fill = first.clone();
        let mut grouped = vec![Item { op: 0, value: 0, start: 0, end: 0 }; self.items.len()];
        for it in &self.items {
            grouped[fill[it.value as usize]] = *it;
            fill[it.value as usize] += 1;
        }
        drop(fill);

        let mut trees = Vec::with_capacity(self.n_values);
        let mut bounds = Vec::with_capacity(2 * grouped.len());
        let mut local = Vec::with_capacity(grouped.len());
        let mut slots = 0usize;
        for v in 0..self.n_values {
            let items = &grouped[first[v]..first[v + 1]];
            let at = bounds.len();
            bounds.extend(items.iter().flat_map(|it| [it.start, it.end]));
            bounds[at..].sort_unstable();
            let mut keep = at;
            for i in at..bounds.len() {
                if i == at || bounds[i] != bounds[keep - 1] {
                    bounds[keep] = bounds[i];
                    keep += 1;
                }
            }
            bounds.truncate(keep);
            let b = &bounds[at..];
            for it in items {
                let s = b.binary_search(&it.start).unwrap() as u32;
                let e = b.binary_search(&it.end).unwrap() as u32;
                local.push((v, it.op, s, e));
            }
            let leaves = b.len().saturating_sub(1) as u32;
            trees.push(TreeMeta { leaves, node_base: slots, bounds: Some(at..keep) });
            slots += 2 * leaves as usize;
        }
        let per_value = Forest::build(trees, bounds, local);

        OpIntervalTree { global, per_value, alive, live }
    }
}

/// Stabbing queries over operation spans, globally and per value.
///
/// Ids are kept in the canonical segment-tree nodes of their span. Removal only
/// clears a shared liveness flag; dead ids are compacted away the next time a
/// query walks over them, so every stored id is dropped at most once.
#[derive(Debug, Clone)]
pub struct OpIntervalTree {
    global: Forest,
    per_value: Forest,
    alive: Vec<bool>,
    live: Vec<u32>,
}

impl OpIntervalTree {
    /// Live operations whose span contains partition `p`, restricted to value `v`
    /// when given.
    pub fn search(&mut self, p: usize, v: Option<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        match v {
            None => self.global.stab(0, p as u32, &self.alive, &mut out),
            Some(v) => self.per_value.stab(v, p as u32, &self.alive, &mut out),
        }
        out.into_iter().map(|op| op as usize).collect()
    }

    /// Removes a live operation of value `v`.
    pub fn remove(&mut self, op: usize, v: usize) -> Result<(), UnknownOp> {
        match self.alive.get_mut(op) {
            Some(a) if *a => {
                *a = false;
                self.live[v] -= 1;
                Ok(())
            }
            _ => Err(UnknownOp(op)),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.live[v] > 0
    }

    pub fn is_live(&self, op: usize) -> bool {
        self.alive.get(op).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone)]
struct TreeMeta {
    leaves: u32,
    node_base: usize,
    bounds: Option<Range<usize>>,
}

/// Many bottom-up segment trees packed into shared arrays.
#[derive(Debug, Clone)]
struct Forest {
    trees: Vec<TreeMeta>,
    bounds: Vec<u32>,
    start: Vec<u32>,
    len: Vec<u32>,
    entries: Vec<u32>,
}

fn canonical(leaves: u32, l: u32, r: u32, mut f: impl FnMut(u32)) {
    let (mut l, mut r) = (l + leaves, r + leaves);
    while l < r {
        if l & 1 == 1 {
            f(l);
            l += 1;
        }
        if r & 1 == 1 {
            r -= 1;
            f(r);
        }
        l >>= 1;
        r >>= 1;
    }
}

impl Forest {
    /// `trees` must have consecutive `node_base`s, each tree taking `2 * leaves` slots.
    fn build(trees: Vec<TreeMeta>, bounds: Vec<u32>, items: Vec<(usize, u32, u32, u32)>) -> Forest {
        let slots = trees.last().map_or(0, |t| t.node_base + 2 * t.leaves as usize);
        let mut count = vec![0u32; slots + 1];
        for &(t, _, l, r) in &items {
            let meta = &trees[t];
            canonical(meta.leaves, l, r, |k| count[meta.node_base + k as usize] += 1);
        }
        let mut start = vec![0u32; slots + 1];
        let mut acc = 0u32;
        for (s, c) in start.iter_mut().zip(&count) {
            *s = acc;
            acc += c;
        }
        let mut len = vec![0u32; slots + 1];
        let mut entries = vec![0u32; acc as usize];
        for &(t, op, l, r) in &items {
            let meta = &trees[t];
            canonical(meta.leaves, l, r, |k| {
                let slot = meta.node_base + k as usize;
                entries[(start[slot] + len[slot]) as usize] = op;
                len[slot] += 1;
            });
        }
        Forest { trees, bounds, start, len, entries }
    }

    fn stab(&mut self, t: usize, p: u32, alive: &[bool], out: &mut Vec<u32>) {
        let meta = &self.trees[t];
        let leaf = match &meta.bounds {
            None if p < meta.leaves => p,
            None => return,
            Some(r) => {
                let b = &self.bounds[r.clone()];
                if b.is_empty() || p < b[0] || p >= b[b.len() - 1] {
                    return;
                }
                (b.partition_point(|&x| x <= p) - 1) as u32
            }
        };
        let base = meta.node_base;
        let mut k = leaf + meta.leaves;
        while k >= 1 {
            let slot = base + k as usize;
            let s = self.start[slot] as usize;
            let mut n = self.len[slot] as usize;
            let mut i = 0;
            while i < n {
                let op = self.entries[s + i];
                if alive[op as usize] {
                    out.push(op);
                    i += 1;
                } else {
                    n -= 1;
                    self.entries.swap(s + i, s + n);
                }
            }
            self.len[slot] = n as u32;
            k >>= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabbing_with_removal() {
        let mut b = OpIntervalTreeBuilder::new(10, 2, 4);
        b.insert(0, 0, 1..5);
        b.insert(1, 1, 3..4);
        b.insert(2, 0, 4..9);
        b.insert(3, 1, 0..10);
        let mut t = b.build();
        let mut hits = t.search(3, None);
        hits.sort();
        assert_eq!(hits, vec![0, 1, 3]);
        assert_eq!(t.search(4, Some(0)).len(), 2);
        assert_eq!(t.search(9, Some(0)), Vec::<usize>::new());
        t.remove(0, 0).unwrap();
        assert!(t.remove(0, 0).is_err());
        assert_eq!(t.search(4, Some(0)), vec![2]);
        assert!(t.contains(0));
        t.remove(2, 0).unwrap();
        assert!(!t.contains(0));
        let mut hits = t.search(3, None);
        hits.sort();
        assert_eq!(hits, vec![1, 3]);
    }
}
