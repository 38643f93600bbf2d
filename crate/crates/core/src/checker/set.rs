//! Sets: values never interact, so a standardized history is linearizable exactly
//! when every failed delete can be placed while its value is absent.

use crate::framework::{Outcome, Verdict};
use crate::model::{Method, Time};
use crate::standardize::StandardizedHistory;

/// A value is safe unless some failed delete is trapped between the latest
/// possible insertion and the earliest possible deletion of that value.
pub fn is_safe_value(sh: &StandardizedHistory, v: usize) -> bool {
    let h = &sh.history;
    let ops = sh.index.ops_of(v);
    let present = || ops.iter().map(|&p| &h.ops[p]).filter(|o| o.method != Method::DeleteFail);
    let min_res = present().map(|o| o.res).min();
    let max_inv = present().map(|o| o.inv).max();
    let (Some(min_res), Some(max_inv)) = (min_res, max_inv) else {
        return true;
    };
    ops.iter()
        .map(|&p| &h.ops[p])
        .filter(|o| o.method == Method::DeleteFail)
        .all(|o| !(min_res <= o.inv && o.res <= max_inv))
}

pub fn check_set(sh: &StandardizedHistory) -> Outcome {
    // Same test as `is_safe_value`, computed for all values in two sweeps.
    let h = &sh.history;
    let m = sh.index.len();
    let values = sh.index.op_values();
    let mut min_res = vec![Time::MAX; m];
    let mut max_inv = vec![Time::MIN; m];
    for (o, v) in h.ops.iter().zip(values) {
        if let (Some(v), true) = (*v, o.method != Method::DeleteFail) {
            min_res[v as usize] = min_res[v as usize].min(o.res);
            max_inv[v as usize] = max_inv[v as usize].max(o.inv);
        }
    }
    let mut safe = vec![true; m];
    for (o, v) in h.ops.iter().zip(values) {
        if let (Some(v), Method::DeleteFail) = (*v, o.method) {
            let v = v as usize;
            if min_res[v] <= o.inv && o.res <= max_inv[v] {
                safe[v] = false;
            }
        }
    }
    let removal_order: Vec<usize> = (0..m).take_while(|&v| safe[v]).collect();
    let verdict = Verdict::from_bool(removal_order.len() == m);
    Outcome { verdict, removal_order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdtKind, History, Operation, Value};
    use crate::standardize::standardize;
    use Method::*;

    fn set(ops: &[(Method, u64, i64, i64)]) -> StandardizedHistory {
        let ops = ops
            .iter()
            .enumerate()
            .map(|(i, &(m, v, a, b))| Operation::new(i as u64 + 1, format!("p{i}").as_str(), m, Value::Id(v), a, b))
            .collect();
        standardize(History::new(AdtKind::Set, ops)).unwrap()
    }

    #[test]
    fn trapped_failed_delete() {
        let sh = set(&[(InsertOk, 1, 1, 2), (DeleteFail, 1, 3, 4), (DeleteOk, 1, 7, 8)]);
        assert!(!is_safe_value(&sh, 0));
        assert_eq!(check_set(&sh).verdict, Verdict::NonLinearizable);
    }

    #[test]
    fn failed_delete_before_insert() {
        let sh = set(&[(DeleteFail, 1, 1, 2), (InsertOk, 1, 3, 4), (ContainsTrue, 1, 5, 6)]);
        assert_eq!(check_set(&sh).verdict, Verdict::Linearizable);
    }

    #[test]
    fn boundary_instant_counts_as_present() {
        // The insert is linearized before 2 and the delete after 5, so (2, 5) is covered.
        let sh = set(&[(InsertOk, 1, 1, 2), (DeleteFail, 1, 2, 5), (DeleteOk, 1, 5, 8)]);
        assert_eq!(check_set(&sh).verdict, Verdict::NonLinearizable);
    }
}
