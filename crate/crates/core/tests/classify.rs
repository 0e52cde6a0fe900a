use monosync::classify::*;
use monosync::families::{binary_family, counter_partial, pairwise_gap_family, ternary_family, CounterBase};
use monosync::reductions::{clause_gadget, ClauseLayout};
use monosync::sample::{permutation, rng, sample_monotonic};
use monosync::{CompleteAutomaton, StateOrder};
use proptest::prelude::*;

#[test]
fn documented_orders_pass() {
    for m in 1..=4 {
        let t = ternary_family(m).unwrap().automaton;
        assert!(check_monotonic(&t, &StateOrder::identity(t.n())).unwrap());
        let b = binary_family(m).unwrap().automaton;
        assert!(check_monotonic(&b, &StateOrder::identity(b.n())).unwrap());
    }
    let g = clause_gadget(&[1, -3, 4], 4).unwrap();
    let lay = ClauseLayout { n: 4 };
    let mut seq = vec![lay.s(), lay.q(1)];
    for i in 2..=4 {
        seq.push(lay.q(i));
        seq.push(lay.q_primed(i));
    }
    seq.push(lay.q(5));
    seq.push(lay.t());
    assert!(check_monotonic(&g.automaton, &StateOrder::new(seq).unwrap()).unwrap());
    assert!(is_weakly_acyclic(&g.automaton));
    assert!(is_weakly_acyclic(&pairwise_gap_family(2).unwrap().automaton));
    let p = counter_partial(3, CounterBase::Ternary).unwrap();
    assert!(check_monotonic(&p, &StateOrder::identity(9)).unwrap());
}

#[test]
fn relabeled_ternary_order_is_recovered_up_to_reversal() {
    let t = ternary_family(2).unwrap().automaton;
    for seed in 0..10 {
        let perm = permutation(7, &mut rng(seed));
        let relabeled = t.relabel(&perm).unwrap();
        let OrderSearch::Found(ord) = find_monotonic_order(&relabeled, DEFAULT_ORDER_BUDGET).unwrap() else {
            panic!("ternary family is monotonic")
        };
        assert!(check_monotonic(&relabeled, &ord).unwrap());
        let back: Vec<usize> = ord
            .states()
            .iter()
            .map(|&q| perm.iter().position(|&p| p == q).unwrap())
            .collect();
        let forward: Vec<usize> = (0..7).collect();
        let backward: Vec<usize> = (0..7).rev().collect();
        assert!(back == forward || back == backward, "{back:?}");
    }
}

#[test]
fn order_search_on_random_monotone_automata() {
    for seed in 0..40 {
        let n = 3 + seed as usize % 8;
        let a = sample_monotonic(n, 3, seed).unwrap();
        let a = a.relabel(&permutation(n, &mut rng(seed + 77))).unwrap();
        match find_monotonic_order(&a, DEFAULT_ORDER_BUDGET).unwrap() {
            OrderSearch::Found(ord) => assert!(check_monotonic(&a, &ord).unwrap()),
            OrderSearch::NoOrder => panic!("seed {seed}: sampled automaton is monotonic"),
        }
    }
}

#[test]
fn order_search_is_exact_on_tiny_automata() {
    // compare against brute force over all permutations
    use itertools::Itertools;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let n = 2 + seed as usize % 4;
        let table = (0..n * 2).map(|_| rand::Rng::gen_range(&mut r, 0..n)).collect();
        let a = CompleteAutomaton::new(n, 2, table).unwrap();
        let brute = (0..n)
            .permutations(n)
            .any(|p| check_monotonic(&a, &StateOrder::new(p).unwrap()).unwrap());
        let found = matches!(
            find_monotonic_order(&a, DEFAULT_ORDER_BUDGET).unwrap(),
            OrderSearch::Found(_)
        );
        assert_eq!(brute, found, "seed {seed}");
    }
}

proptest! {
    #[test]
    fn reversal_preserves_monotonicity(n in 1usize..9, seed in any::<u64>()) {
        let a = sample_monotonic(n, 2, seed).unwrap();
        let id = StateOrder::identity(n);
        prop_assert!(check_monotonic(&a, &id).unwrap());
        prop_assert!(check_monotonic(&a, &id.reversed()).unwrap());
    }

    #[test]
    fn weakly_acyclic_witness_is_topological(
        n in 1usize..8,
        table in proptest::collection::vec(any::<prop::sample::Index>(), 16),
    ) {
        // forward-only random automaton, then shuffled
        let t: Vec<usize> = (0..n * 2).map(|i| {
            let q = i / 2;
            q + table[i % 16].index(n - q)
        }).collect();
        let a = CompleteAutomaton::new(n, 2, t).unwrap();
        let ord = weakly_acyclic_order(&a).unwrap();
        for q in 0..n {
            for &d in a.row(q) {
                prop_assert!(ord.position(q) <= ord.position(d));
            }
        }
    }
}
