//! Dense value numbering and per-value operation groups.

use std::collections::HashMap;

use crate::model::History;

/// Marks "no operation" in the `add`/`remove` tables.
pub const NO_OP: usize = usize::MAX;

/// Values are numbered `0..len()` in ascending id order, so dense order agrees with
/// the value order used by priority queues. Op positions refer to `History::ops`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueIndex {
    ids: Vec<u64>,
    op_value: Vec<Option<u32>>,
    offsets: Vec<usize>,
    members: Vec<usize>,
    add: Vec<usize>,
    remove: Vec<usize>,
}

/// Assigns dense numbers in ascending id order. Small ids (the common case) use a
/// direct-address table; sparse ids fall back to sorting and hashing.
pub(crate) fn number_values(h: &History) -> (Vec<u64>, Vec<Option<u32>>) {
    let max_id = h.ops.iter().filter_map(|o| o.value.id()).max().unwrap_or(0);
    if max_id as usize <= 4 * h.len() + 64 {
        let mut table = vec![u32::MAX; max_id as usize + 1];
        for v in h.ops.iter().filter_map(|o| o.value.id()) {
            table[v as usize] = 0;
        }
        let mut ids = Vec::new();
        for (v, slot) in table.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = ids.len() as u32;
                ids.push(v as u64);
            }
        }
        let op_value = h.ops.iter().map(|o| o.value.id().map(|v| table[v as usize])).collect();
        (ids, op_value)
    } else {
        let mut ids: Vec<u64> = h.ops.iter().filter_map(|o| o.value.id()).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense: HashMap<u64, u32> = ids.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let op_value = h.ops.iter().map(|o| o.value.id().map(|v| dense[&v])).collect();
        (ids, op_value)
    }
}

impl ValueIndex {
    pub fn build(h: &History) -> Self {
        let (ids, op_value) = number_values(h);
        Self::from_numbering(h, ids, op_value)
    }

    /// Groups operations given a numbering already computed for `h`.
    pub(crate) fn from_numbering(h: &History, ids: Vec<u64>, op_value: Vec<Option<u32>>) -> Self {
        debug_assert_eq!(op_value.len(), h.len());
        let m = ids.len();

        let mut offsets = vec![0usize; m + 1];
        for v in op_value.iter().flatten() {
            offsets[*v as usize + 1] += 1;
        }
        for i in 0..m {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0usize; offsets[m]];
        let mut add = vec![NO_OP; m];
        let mut remove = vec![NO_OP; m];
        let add_method = h.adt.add_method();
        let remove_method = h.adt.remove_method();
        for (pos, v) in op_value.iter().enumerate() {
            if let Some(v) = *v {
                let v = v as usize;
                members[fill[v]] = pos;
                fill[v] += 1;
                let method = h.ops[pos].method;
                if method == add_method {
                    add[v] = pos;
                } else if Some(method) == remove_method {
                    remove[v] = pos;
                }
            }
        }
        ValueIndex { ids, op_value, offsets, members, add, remove }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn dense(&self, id: u64) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn value_of(&self, pos: usize) -> Option<usize> {
        self.op_value[pos].map(|v| v as usize)
    }

    /// Dense value of every operation, by position.
    pub fn op_values(&self) -> &[Option<u32>] {
        &self.op_value
    }

    /// Positions of all operations on value `v`, in history order.
    pub fn ops_of(&self, v: usize) -> &[usize] {
        &self.members[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn add_of(&self, v: usize) -> Option<usize> {
        Some(self.add[v]).filter(|&p| p != NO_OP)
    }

    pub fn remove_of(&self, v: usize) -> Option<usize> {
        Some(self.remove[v]).filter(|&p| p != NO_OP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdtKind, Method, Operation, Value};

    #[test]
    fn groups_by_value_in_id_order() {
        let h = History::new(
            AdtKind::Queue,
            vec![
                Operation::new(1, "a", Method::Enq, Value::Id(40), 1, 2),
                Operation::new(2, "b", Method::Enq, Value::Id(7), 1, 2),
                Operation::new(3, "a", Method::Deq, Value::Id(40), 3, 4),
                Operation::new(4, "b", Method::Empty, Value::Empty, 3, 4),
            ],
        );
        let idx = ValueIndex::build(&h);
        assert_eq!(idx.ids(), &[7, 40]);
        assert_eq!(idx.ops_of(1), &[0, 2]);
        assert_eq!(idx.add_of(1), Some(0));
        assert_eq!(idx.remove_of(1), Some(2));
        assert_eq!(idx.remove_of(0), None);
        assert_eq!(idx.value_of(3), None);
        assert_eq!(idx.dense(7), Some(0));
    }

    #[test]
    fn sparse_ids_use_the_same_numbering() {
        let h = History::new(
            AdtKind::Stack,
            vec![
                Operation::new(1, "a", Method::Push, Value::Id(u64::MAX), 1, 2),
                Operation::new(2, "b", Method::Push, Value::Id(3), 1, 2),
            ],
        );
        let idx = ValueIndex::build(&h);
        assert_eq!(idx.ids(), &[3, u64::MAX]);
        assert_eq!(idx.value_of(0), Some(1));
    }
}
