//! Seeded history generation: linearizable-by-construction workloads, mutations
//! that usually break linearizability, and unstructured small histories for
//! differential testing.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{AdtKind, History, Method, Operation, Process, Time, Value};

/// Gap between consecutive linearization points. Four ticks leave room for a
/// response and the next invocation of the same process to fit strictly between
/// two points even with a single process.
const SPACING: Time = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenConfig {
    pub adt: AdtKind,
    pub n_ops: usize,
    pub n_procs: usize,
    pub seed: u64,
    /// Probability of a peek when the container is nonempty. Registers mix reads
    /// and writes evenly instead.
    pub peek_ratio: f64,
    /// Set only: probability of a failing insert/delete or a `contains`.
    pub fail_ratio: f64,
    /// Probability of an `empty` op when the container is empty.
    pub empty_ratio: f64,
    /// Maximum widening of a window on each side of its linearization point, in ticks.
    pub relax: Time,
    /// Cap on distinct values; `None` means one per add.
    pub max_values: Option<usize>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            adt: AdtKind::Queue,
            n_ops: 100,
            n_procs: 4,
            seed: 0,
            peek_ratio: 0.1,
            fail_ratio: 0.1,
            empty_ratio: 0.1,
            relax: 8,
            max_values: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("at least one process is needed")]
    NoProcesses,
    #[error("ratio `{0}` must lie in [0, 1]")]
    BadRatio(&'static str),
    #[error("relax must be at least 1 tick")]
    BadRelax,
    #[error("max_values must be at least 1")]
    NoValues,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n_procs == 0 {
            return Err(GenError::NoProcesses);
        }
        for (name, r) in
            [("peek_ratio", self.peek_ratio), ("fail_ratio", self.fail_ratio), ("empty_ratio", self.empty_ratio)]
        {
            if !(0.0..=1.0).contains(&r) {
                return Err(GenError::BadRatio(name));
            }
        }
        if self.relax < 1 {
            return Err(GenError::BadRelax);
        }
        if self.max_values == Some(0) {
            return Err(GenError::NoValues);
        }
        Ok(())
    }
}

#[derive(Default)]
struct Contents {
    register: Option<u64>,
    set: Vec<u64>,
    deleted: Vec<u64>,
    stack: Vec<u64>,
    queue: VecDeque<u64>,
    pq: BTreeSet<u64>,
}

impl Contents {
    fn is_empty(&self, adt: AdtKind) -> bool {
        match adt {
            AdtKind::Register => self.register.is_none(),
            AdtKind::Set => self.set.is_empty(),
            AdtKind::Stack => self.stack.is_empty(),
            AdtKind::Queue => self.queue.is_empty(),
            AdtKind::PriorityQueue => self.pq.is_empty(),
        }
    }

    /// The value the next peek or remove observes.
    fn next_out(&self, adt: AdtKind) -> Option<u64> {
        match adt {
            AdtKind::Stack => self.stack.last().copied(),
            AdtKind::Queue => self.queue.front().copied(),
            AdtKind::PriorityQueue => self.pq.last().copied(),
            _ => None,
        }
    }

    fn add(&mut self, adt: AdtKind, v: u64) {
        match adt {
            AdtKind::Register => self.register = Some(v),
            AdtKind::Set => self.set.push(v),
            AdtKind::Stack => self.stack.push(v),
            AdtKind::Queue => self.queue.push_back(v),
            AdtKind::PriorityQueue => {
                self.pq.insert(v);
            }
        }
    }

    fn remove_next(&mut self, adt: AdtKind) -> u64 {
        match adt {
            AdtKind::Stack => self.stack.pop(),
            AdtKind::Queue => self.queue.pop_front(),
            AdtKind::PriorityQueue => self.pq.pop_last(),
            _ => None,
        }
        .expect("caller checked nonempty")
    }
}

/// A linearizable sequential run rendered as a concurrent history: op `i` is
/// linearized at `SPACING * (i + 1)`, processes take ops round-robin, and each
/// window is widened by a seeded amount up to `relax` without overlapping the
/// neighbouring ops of its own process.
pub fn generate_linearizable(cfg: &GenConfig) -> Result<History, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seq = simulate(cfg, &mut rng);
    Ok(render(cfg, &seq, &mut rng))
}

fn simulate(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Vec<(Method, Value)> {
    let adt = cfg.adt;
    let cap = cfg.max_values.unwrap_or(cfg.n_ops).min(cfg.n_ops).max(1);
    // Fresh values count up like a producer's sequence numbers, except that
    // priorities are drawn in random order.
    let mut pool: Vec<u64> = (1..=cfg.n_ops.max(1) as u64).collect();
    if adt == AdtKind::PriorityQueue {
        pool.shuffle(rng);
    }
    pool.truncate(cap);
    let mut fresh = pool.into_iter();
    let mut fresh_left = cap;
    let mut take = |left: &mut usize| {
        *left -= 1;
        fresh.next().unwrap()
    };
    let mut c = Contents::default();
    let mut seq = Vec::with_capacity(cfg.n_ops);
    for _ in 0..cfg.n_ops {
        let empty = c.is_empty(adt);
        let step = match adt {
            AdtKind::Register => {
                if empty || (fresh_left > 0 && rng.gen_bool(0.5)) {
                    if fresh_left == 0 {
                        (Method::Read, Value::Id(c.register.unwrap()))
                    } else {
                        let v = take(&mut fresh_left);
                        c.add(adt, v);
                        (Method::Write, Value::Id(v))
                    }
                } else {
                    (Method::Read, Value::Id(c.register.unwrap()))
                }
            }
            AdtKind::Set => {
                let can_fail = !c.set.is_empty() || !c.deleted.is_empty();
                if can_fail && (rng.gen_bool(cfg.fail_ratio) || (fresh_left == 0 && c.set.is_empty())) {
                    let present = !c.set.is_empty() && (c.deleted.is_empty() || rng.gen_bool(0.5));
                    let pool = if present { &c.set } else { &c.deleted };
                    let v = *pool.choose(rng).unwrap();
                    let method = match (present, rng.gen_bool(0.5)) {
                        (true, true) => Method::InsertFail,
                        (true, false) => Method::ContainsTrue,
                        (false, true) => Method::DeleteFail,
                        (false, false) => Method::ContainsFalse,
                    };
                    (method, Value::Id(v))
                } else if !c.set.is_empty() && (fresh_left == 0 || rng.gen_bool(0.5)) {
                    let i = rng.gen_range(0..c.set.len());
                    let v = c.set.swap_remove(i);
                    c.deleted.push(v);
                    (Method::DeleteOk, Value::Id(v))
                } else {
                    let v = take(&mut fresh_left);
                    c.add(adt, v);
                    (Method::InsertOk, Value::Id(v))
                }
            }
            AdtKind::Stack | AdtKind::Queue | AdtKind::PriorityQueue => {
                let (add, remove) = (adt.add_method(), adt.remove_method().unwrap());
                if !empty && rng.gen_bool(cfg.peek_ratio) {
                    (Method::Peek, Value::Id(c.next_out(adt).unwrap()))
                } else if empty {
                    if fresh_left == 0 || rng.gen_bool(cfg.empty_ratio) {
                        (Method::Empty, Value::Empty)
                    } else {
                        let v = take(&mut fresh_left);
                        c.add(adt, v);
                        (add, Value::Id(v))
                    }
                } else if fresh_left > 0 && rng.gen_bool(0.5) {
                    let v = take(&mut fresh_left);
                    c.add(adt, v);
                    (add, Value::Id(v))
                } else {
                    (remove, Value::Id(c.remove_next(adt)))
                }
            }
        };
        seq.push(step);
    }
    seq
}

fn render(cfg: &GenConfig, seq: &[(Method, Value)], rng: &mut ChaCha8Rng) -> History {
    let n = seq.len();
    let procs: Vec<Process> = (0..cfg.n_procs).map(|k| Process::new(&format!("p{}", k + 1))).collect();
    let point = |i: usize| SPACING * (i as Time + 1);
    let mut inv = vec![0; n];
    let mut res = vec![0; n];
    for k in 0..cfg.n_procs.min(n) {
        let mine: Vec<usize> = (k..n).step_by(cfg.n_procs).collect();
        let first = point(mine[0]);
        inv[mine[0]] = rng.gen_range((first - cfg.relax).max(1)..first);
        for w in mine.windows(2) {
            let (a, b) = (point(w[0]), point(w[1]));
            res[w[0]] = rng.gen_range(a + 1..=(a + cfg.relax).min(b - 2));
            inv[w[1]] = rng.gen_range((b - cfg.relax).max(res[w[0]] + 1)..b);
        }
        let last = *mine.last().unwrap();
        res[last] = rng.gen_range(point(last) + 1..=point(last) + cfg.relax);
    }
    let ops = seq
        .iter()
        .enumerate()
        .map(|(i, &(method, value))| Operation {
            id: i as u64 + 1,
            process: procs[i % cfg.n_procs].clone(),
            method,
            value,
            inv: inv[i],
            res: res[i],
        })
        .collect();
    History::new(cfg.adt, ops)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// Exchange the values of two removes.
    SwapRemoveValues,
    /// Narrow one window.
    ShrinkWindow,
    /// Slide one window, keeping its process sequential.
    ShiftWindow,
    /// Delete one add; the result is ambiguous by design.
    DropAdd,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] =
        [MutationKind::SwapRemoveValues, MutationKind::ShrinkWindow, MutationKind::ShiftWindow, MutationKind::DropAdd];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::SwapRemoveValues => "swap_remove_values",
            MutationKind::ShrinkWindow => "shrink_window",
            MutationKind::ShiftWindow => "shift_window",
            MutationKind::DropAdd => "drop_add",
        }
    }
}

impl std::str::FromStr for MutationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MutationKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown mutation `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutated {
    pub history: History,
    /// `false` when the mutation had nothing to act on and the history is unchanged.
    pub changed: bool,
}

pub fn mutate(h: &History, kind: MutationKind, seed: u64) -> Mutated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = h.clone();
    let changed = match kind {
        MutationKind::SwapRemoveValues => {
            // Distinct removes carry distinct values in an unambiguous history.
            let removes: Vec<usize> = (0..out.len()).filter(|&i| out.ops[i].method.is_remove()).collect();
            if removes.len() < 2 {
                false
            } else {
                let picked: Vec<usize> = removes.choose_multiple(&mut rng, 2).copied().collect();
                let (a, b) = (picked[0], picked[1]);
                let va = out.ops[a].value;
                out.ops[a].value = out.ops[b].value;
                out.ops[b].value = va;
                va != out.ops[a].value
            }
        }
        MutationKind::ShrinkWindow => {
            let wide: Vec<usize> = (0..out.len()).filter(|&i| out.ops[i].res - out.ops[i].inv >= 2).collect();
            match wide.choose(&mut rng) {
                Some(&i) => {
                    let (a, b) = (out.ops[i].inv, out.ops[i].res);
                    loop {
                        let na = rng.gen_range(a..b);
                        let nb = rng.gen_range(na + 1..=b);
                        if (na, nb) != (a, b) {
                            out.ops[i].inv = na;
                            out.ops[i].res = nb;
                            break;
                        }
                    }
                    true
                }
                None => false,
            }
        }
        MutationKind::ShiftWindow => {
            let mut order: Vec<usize> = (0..out.len()).collect();
            order.shuffle(&mut rng);
            let mut done = false;
            for i in order {
                let mut d = rng.gen_range(-4..=3);
                if d >= 0 {
                    d += 1;
                }
                let (a, b) = (out.ops[i].inv + d, out.ops[i].res + d);
                let p = &out.ops[i].process;
                let clash =
                    out.ops.iter().enumerate().any(|(j, o)| j != i && &o.process == p && o.inv <= b && a <= o.res);
                if !clash {
                    out.ops[i].inv = a;
                    out.ops[i].res = b;
                    done = true;
                    break;
                }
            }
            done
        }
        MutationKind::DropAdd => {
            let adds: Vec<usize> = (0..out.len()).filter(|&i| out.ops[i].method == out.adt.add_method()).collect();
            match adds.choose(&mut rng) {
                Some(&i) => {
                    out.ops.remove(i);
                    true
                }
                None => false,
            }
        }
    };
    Mutated { history: out, changed }
}

/// An unstructured small history: random windows over a short time range (so
/// timestamps often coincide) and random methods, subject only to
/// well-formedness and unambiguity. Each value gets exactly one add and at most
/// one remove; processes are allocated greedily to keep them sequential.
pub fn random_history(adt: AdtKind, n_ops: usize, max_values: usize, max_time: Time, seed: u64) -> History {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_values = if n_ops == 0 { 0 } else { rng.gen_range(1..=max_values.clamp(1, n_ops)) };
    let mut steps: Vec<(Method, Value)> = (1..=n_values as u64).map(|v| (adt.add_method(), Value::Id(v))).collect();
    let mut removed = vec![false; n_values + 1];
    let observers: &[Method] = match adt {
        AdtKind::Register => &[Method::Read],
        AdtKind::Set => {
            &[Method::DeleteOk, Method::InsertFail, Method::DeleteFail, Method::ContainsTrue, Method::ContainsFalse]
        }
        AdtKind::Stack => &[Method::Pop, Method::Peek, Method::Empty],
        AdtKind::Queue | AdtKind::PriorityQueue => &[Method::Deq, Method::Peek, Method::Empty],
    };
    while steps.len() < n_ops {
        let v = rng.gen_range(1..=n_values as u64);
        let m = *observers.choose(&mut rng).unwrap();
        if m.is_remove() {
            if removed[v as usize] {
                continue;
            }
            removed[v as usize] = true;
        }
        let value = if m == Method::Empty { Value::Empty } else { Value::Id(v) };
        steps.push((m, value));
    }
    steps.shuffle(&mut rng);

    let span = max_time.max(2);
    let mut busy: Vec<Vec<(Time, Time)>> = Vec::new();
    let ops = steps
        .into_iter()
        .enumerate()
        .map(|(i, (method, value))| {
            let inv = rng.gen_range(0..span - 1);
            let res = rng.gen_range(inv + 1..=(inv + 1 + span / 2).min(span));
            let k = busy.iter().position(|ws| ws.iter().all(|&(a, b)| res < a || b < inv)).unwrap_or_else(|| {
                busy.push(Vec::new());
                busy.len() - 1
            });
            busy[k].push((inv, res));
            Operation { id: i as u64 + 1, process: Process::new(&format!("p{}", k + 1)), method, value, inv, res }
        })
        .collect();
    History::new(adt, ops)
}
