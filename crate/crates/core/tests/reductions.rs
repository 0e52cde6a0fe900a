use monosync::classify::{check_monotonic, is_weakly_acyclic};
use monosync::oracle::*;
use monosync::reductions::*;
use monosync::sample::rng;
use monosync::{Error, StateOrder};
use rand::Rng;

fn random_cnf(nvars: usize, nclauses: usize, seed: u64) -> Cnf {
    let mut r = rng(seed);
    let clauses = (0..nclauses)
        .map(|_| {
            let width = r.gen_range(1..=3);
            (0..width)
                .map(|_| {
                    let v = r.gen_range(1..=nvars as i32);
                    if r.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    Cnf::new(nvars, clauses).unwrap()
}

fn check_all(cnf: &Cnf) {
    let n = cnf.nvars();
    let h = oracle_min_unsat(cnf).unwrap();

    let acceptors = sat_to_intersection(cnf).unwrap();
    for acc in &acceptors {
        assert!(is_weakly_acyclic(&acc.automaton));
    }
    let w = oracle_intersection(&acceptors, Budget::default()).unwrap();
    assert_eq!(w.is_some(), h == 0, "{cnf:?}");
    if let (Some(w), false) = (w, cnf.clauses().is_empty()) {
        assert_eq!(w.len(), n + 1);
        let z = decode_assignment(&w, n, None).unwrap();
        assert!(cnf.satisfied_by(&z));
    }

    if !cnf.clauses().is_empty() {
        let inst = max3sat_to_rank(cnf).unwrap();
        assert!(check_monotonic(&inst.automaton, &inst.order).unwrap());
        assert!(is_weakly_acyclic(&inst.automaton));
        let rank = oracle_rank(&inst.automaton, &inst.subset, Budget::default()).unwrap();
        assert_eq!(rank.rank, cnf.clauses().len() + h, "{cnf:?}");
    }

    let inst = sat_to_careful(cnf).unwrap();
    assert!(check_monotonic(&inst.automaton, &inst.order).unwrap());
    let w = oracle_careful_sync(&inst.automaton, Budget::default()).unwrap();
    assert_eq!(w.is_some(), h == 0, "{cnf:?}");
    if let (Some(w), false) = (w, cnf.clauses().is_empty()) {
        let z = decode_assignment(&w, n, Some(RESTART)).unwrap();
        assert!(cnf.satisfied_by(&z));
    }
}

#[test]
fn small_formulas() {
    let cases = [
        (1, vec![vec![1]]),
        (1, vec![vec![1], vec![-1]]),
        (2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]),
        (2, vec![vec![1, -1]]),
        (3, vec![vec![1, 2, 3], vec![-1, -2], vec![-3]]),
        (3, vec![]),
    ];
    for (n, clauses) in cases {
        check_all(&Cnf::new(n, clauses).unwrap());
    }
}

#[test]
fn random_formulas() {
    for seed in 0..40 {
        let nvars = 1 + seed as usize % 4;
        let nclauses = 1 + seed as usize % 4;
        check_all(&random_cnf(nvars, nclauses, seed));
    }
}

#[test]
fn rank_of_unsatisfiable_pair() {
    let cnf = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
    let inst = max3sat_to_rank(&cnf).unwrap();
    assert_eq!(
        oracle_rank(&inst.automaton, &inst.subset, Budget::default())
            .unwrap()
            .rank,
        3
    );
    assert_eq!(oracle_min_unsat_with_assignment(&cnf).unwrap().0, 1);
}

#[test]
fn gadget_layouts() {
    let lay = ClauseLayout { n: 3 };
    assert_eq!(lay.states(), 8);
    assert_eq!(
        (lay.s(), lay.q(1), lay.q(2), lay.q_primed(2), lay.q(4), lay.t()),
        (0, 1, 2, 3, 6, 7)
    );
    let tim = timer_gadget(3).unwrap();
    let tl = TimerLayout { n: 3 };
    assert_eq!(tim.automaton.n(), 6);
    assert!(check_monotonic(&tim.automaton, &StateOrder::identity(6)).unwrap());
    assert!(tim.accepts(&vec![0, 1, 1, 2].into()).unwrap());
    assert!(tim.accepts(&vec![2].into()).unwrap());
    assert!(!tim.accepts(&vec![0, 1, 1, 0, 2].into()).unwrap());
    assert_eq!(tim.automaton.delta(tl.b(), 2), tl.b());
}

#[test]
fn clause_gadget_semantics() {
    // accepts z_1..z_n r exactly when z satisfies the clause
    let clause = [1, -3];
    let g = clause_gadget(&clause, 3).unwrap();
    for bits in 0u32..8 {
        let z: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
        let mut w: Vec<usize> = z.iter().map(|&b| b as usize).collect();
        w.push(RESET);
        assert_eq!(g.accepts(&w.into()).unwrap(), z[0] || !z[2], "{z:?}");
    }
}

#[test]
fn invalid_formulas() {
    assert!(matches!(Cnf::new(2, vec![vec![]]), Err(Error::InvalidCnf(_))));
    assert!(matches!(Cnf::new(2, vec![vec![3]]), Err(Error::InvalidCnf(_))));
    assert!(Cnf::new(0, vec![]).is_err());
    assert!(max3sat_to_rank(&Cnf::new(2, vec![]).unwrap()).is_err());
    assert!(clause_gadget(&[], 2).is_err());
}

#[test]
fn dimacs_round_trip() {
    let cnf = random_cnf(4, 5, 9);
    assert_eq!(Cnf::parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    let text = "c comment\np cnf 3 2\n1 -2\n 0 3 0\n";
    let parsed = Cnf::parse_dimacs(text).unwrap();
    assert_eq!(parsed.clauses(), &[vec![1, -2], vec![3]]);
    assert!(Cnf::parse_dimacs("p cnf 2 1\n1 5 0\n").is_err());
}
