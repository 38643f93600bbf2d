//! The fast pipeline and every reference predicate agree with exhaustive search.

use linmon::checker::{pqueue, queue, stack};
use linmon::generator::random_history;
use linmon::{
    check, generate_linearizable, is_linearizable_bruteforce, mutate, standardize, AdtKind, GenConfig, History,
    MutationKind, OracleBudget,
};

fn oracle(h: &History) -> bool {
    is_linearizable_bruteforce(h, OracleBudget::default()).expect("small histories fit the budget")
}

fn assert_agrees(h: &History) {
    let fast = check(h).expect("generated histories are valid").verdict.is_linearizable();
    assert_eq!(fast, oracle(h), "disagreement on\n{}", linmon::serialize_history(h, linmon::Format::Ops).unwrap());
}

#[test]
fn random_small_histories() {
    for adt in AdtKind::ALL {
        for seed in 0..1500 {
            let n = 1 + (seed as usize % 8);
            assert_agrees(&random_history(adt, n, 4, 2 + (seed as i64 % 9), seed));
        }
    }
}

#[test]
fn generated_and_mutated_histories() {
    let kinds = [MutationKind::SwapRemoveValues, MutationKind::ShrinkWindow, MutationKind::ShiftWindow];
    for adt in AdtKind::ALL {
        for seed in 0..600u64 {
            let cfg = GenConfig {
                adt,
                n_ops: 1 + (seed as usize % 8),
                n_procs: 1 + (seed as usize % 4),
                seed,
                peek_ratio: 0.25,
                fail_ratio: 0.3,
                empty_ratio: 0.3,
                relax: 2 + (seed as i64 % 10),
                max_values: Some(4),
            };
            let h = generate_linearizable(&cfg).unwrap();
            assert!(oracle(&h), "generator produced a non-linearizable history");
            assert_agrees(&h);
            let m = mutate(&h, kinds[seed as usize % 3], seed).history;
            assert_agrees(&m);
        }
    }
}

#[test]
fn standardization_preserves_linearizability() {
    for adt in [AdtKind::Set, AdtKind::Stack, AdtKind::Queue, AdtKind::PriorityQueue] {
        for seed in 0..1000 {
            let h = random_history(adt, 1 + (seed as usize % 10), 4, 2 + (seed as i64 % 9), seed);
            let expected = oracle(&h);
            match standardize(h.clone()) {
                Ok(sh) => assert_eq!(oracle(&sh.history), expected, "seed {seed} {adt}"),
                Err(_) => assert!(!expected, "seed {seed} {adt}: rejected a linearizable history"),
            }
        }
    }
}

#[test]
fn naive_checkers_match_optimized() {
    for seed in 0..1000 {
        for adt in [AdtKind::Stack, AdtKind::Queue, AdtKind::PriorityQueue] {
            let h = random_history(adt, 1 + (seed as usize % 12), 5, 2 + (seed as i64 % 11), seed);
            let Ok(sh) = standardize(h) else { continue };
            let (fast, naive) = match adt {
                AdtKind::Stack => (stack::check_stack(&sh), stack::check_stack_naive(&sh)),
                AdtKind::Queue => (queue::check_queue(&sh), queue::check_queue_naive(&sh)),
                _ => (pqueue::check_pqueue(&sh), pqueue::check_pqueue_naive(&sh)),
            };
            assert_eq!(fast.verdict, naive.verdict, "seed {seed} {adt}");
        }
    }
}
