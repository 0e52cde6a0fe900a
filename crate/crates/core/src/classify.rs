//! Structural classes: monotonic (with order verification and discovery),
//! weakly acyclic, strongly connected.

use std::collections::BTreeSet;

use crate::automaton::{CompleteAutomaton, State, StateOrder, Transitions};
use crate::error::{Error, Result};

/// Default node budget for [`find_monotonic_order`].
pub const DEFAULT_ORDER_BUDGET: u64 = 10_000_000;

/// Checks that every letter maps states, read in `ord` order, to a
/// non-decreasing sequence of images. Undefined entries are skipped, so the
/// same test covers partial automata.
pub fn check_monotonic<A: Transitions + ?Sized>(a: &A, ord: &StateOrder) -> Result<bool> {
    if ord.len() != a.num_states() {
        return Err(Error::InvalidOrder(format!(
            "order has {} states, automaton has {}",
            ord.len(),
            a.num_states()
        )));
    }
    for x in 0..a.num_letters() {
        let mut last = None;
        for &q in ord.states() {
            if let Some(t) = a.step(q, x) {
                let p = ord.position(t);
                if last.is_some_and(|l| p < l) {
                    return Ok(false);
                }
                last = Some(p);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSearch {
    Found(StateOrder),
    NoOrder,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Unknown,
    Less,
    Greater,
}

struct OrderSolver<'a, A: ?Sized> {
    a: &'a A,
    n: usize,
    nodes: u64,
    budget: u64,
}

impl<A: Transitions + ?Sized> OrderSolver<'_, A> {
    /// Records `p < q` and closes under transitivity and the letter
    /// implications `p < q => d(p,x) <= d(q,x)`. Returns false on conflict.
    fn assert_less(&mut self, rel: &mut [Rel], p: State, q: State) -> Result<bool> {
        let n = self.n;
        let mut queue = vec![(p, q)];
        while let Some((p, q)) = queue.pop() {
            if p == q {
                return Ok(false);
            }
            match rel[p * n + q] {
                Rel::Less => continue,
                Rel::Greater => return Ok(false),
                Rel::Unknown => {}
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "order search exceeded {} nodes",
                    self.budget
                )));
            }
            rel[p * n + q] = Rel::Less;
            rel[q * n + p] = Rel::Greater;
            for x in 0..self.a.num_letters() {
                if let (Some(dp), Some(dq)) = (self.a.step(p, x), self.a.step(q, x)) {
                    if dp != dq {
                        queue.push((dp, dq));
                    }
                }
            }
            for r in 0..n {
                if rel[r * n + p] == Rel::Less {
                    queue.push((r, q));
                }
                if rel[q * n + r] == Rel::Less {
                    queue.push((p, r));
                }
            }
        }
        Ok(true)
    }

    fn search(&mut self, rel: Vec<Rel>, first: bool) -> Result<Option<Vec<Rel>>> {
        let n = self.n;
        let open = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .find(|&(p, q)| rel[p * n + q] == Rel::Unknown);
        let Some((p, q)) = open else {
            return Ok(Some(rel));
        };
        let mut attempt = rel.clone();
        if self.assert_less(&mut attempt, p, q)? {
            if let Some(done) = self.search(attempt, false)? {
                return Ok(Some(done));
            }
        }
        // Reversal of a valid order is valid, so the very first branch
        // point needs only one side.
        if first {
            return Ok(None);
        }
        let mut attempt = rel;
        if self.assert_less(&mut attempt, q, p)? {
            return self.search(attempt, false);
        }
        Ok(None)
    }
}

/// Searches for a linear order preserved by all (defined) transitions.
///
/// Backtracking over pairwise comparisons with propagation; `budget` caps
/// the number of pair assignments.
pub fn find_monotonic_order<A: Transitions + ?Sized>(a: &A, budget: u64) -> Result<OrderSearch> {
    let n = a.num_states();
    let mut solver = OrderSolver { a, n, nodes: 0, budget };
    let Some(rel) = solver.search(vec![Rel::Unknown; n * n], true)? else {
        return Ok(OrderSearch::NoOrder);
    };
    let mut seq: Vec<State> = (0..n).collect();
    seq.sort_by_key(|&q| (0..n).filter(|&r| rel[r * n + q] == Rel::Less).count());
    let ord = StateOrder::new(seq)?;
    debug_assert!(check_monotonic(a, &ord)?);
    Ok(OrderSearch::Found(ord))
}

/// Returns a topological order (ignoring self-loops) when one exists.
/// Among available states the smallest index is taken first.
pub fn weakly_acyclic_order(a: &CompleteAutomaton) -> Option<StateOrder> {
    let n = a.n();
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<BTreeSet<State>> = vec![BTreeSet::new(); n];
    for (q, out) in succ.iter_mut().enumerate() {
        for &t in a.row(q) {
            if t != q && out.insert(t) {
                indeg[t] += 1;
            }
        }
    }
    let mut ready: BTreeSet<State> = (0..n).filter(|&q| indeg[q] == 0).collect();
    let mut seq = Vec::with_capacity(n);
    while let Some(q) = ready.pop_first() {
        seq.push(q);
        for &t in &succ[q] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert(t);
            }
        }
    }
    (seq.len() == n).then(|| StateOrder::new(seq).expect("topological order is a permutation"))
}

pub fn is_weakly_acyclic(a: &CompleteAutomaton) -> bool {
    weakly_acyclic_order(a).is_some()
}

/// Strong connectivity of a digraph given as adjacency lists.
pub(crate) fn adjacency_strongly_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut rev = vec![Vec::new(); n];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            rev[v].push(u);
        }
    }
    let reach_all = |g: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &v in &g[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(adj) && reach_all(&rev)
}

pub fn is_strongly_connected(a: &CompleteAutomaton) -> bool {
    let adj: Vec<Vec<usize>> = (0..a.n()).map(|q| a.row(q).to_vec()).collect();
    adjacency_strongly_connected(&adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::PartialAutomaton;

    fn swap() -> CompleteAutomaton {
        CompleteAutomaton::new(2, 1, vec![1, 0]).unwrap()
    }

    #[test]
    fn swap_is_not_monotonic() {
        let a = swap();
        assert!(!check_monotonic(&a, &StateOrder::identity(2)).unwrap());
        assert!(!check_monotonic(&a, &StateOrder::new(vec![1, 0]).unwrap()).unwrap());
        assert_eq!(
            find_monotonic_order(&a, DEFAULT_ORDER_BUDGET).unwrap(),
            OrderSearch::NoOrder
        );
    }

    #[test]
    fn identity_automaton_has_an_order() {
        let a = CompleteAutomaton::from_fn(4, 2, |q, _| q).unwrap();
        let OrderSearch::Found(ord) = find_monotonic_order(&a, DEFAULT_ORDER_BUDGET).unwrap() else {
            panic!("expected an order")
        };
        assert!(check_monotonic(&a, &ord).unwrap());
    }

    #[test]
    fn order_length_mismatch_is_an_error() {
        assert!(check_monotonic(&swap(), &StateOrder::identity(3)).is_err());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let a = CompleteAutomaton::from_fn(6, 1, |q, _| q).unwrap();
        assert!(matches!(find_monotonic_order(&a, 2), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn partial_monotonicity_skips_undefined() {
        // images in order: 2, -, 0 is decreasing; 2, -, 2 is fine
        let bad = PartialAutomaton::new(3, 1, vec![Some(2), None, Some(0)]).unwrap();
        assert!(!check_monotonic(&bad, &StateOrder::identity(3)).unwrap());
        let good = PartialAutomaton::new(3, 1, vec![Some(2), None, Some(2)]).unwrap();
        assert!(check_monotonic(&good, &StateOrder::identity(3)).unwrap());
    }

    #[test]
    fn weak_acyclicity_and_connectivity() {
        assert!(!is_weakly_acyclic(&swap()));
        assert!(is_strongly_connected(&swap()));
        let single = CompleteAutomaton::new(1, 2, vec![0, 0]).unwrap();
        assert!(is_strongly_connected(&single));
        assert!(is_weakly_acyclic(&single));
        let sink = CompleteAutomaton::new(3, 1, vec![1, 2, 2]).unwrap();
        assert!(!is_strongly_connected(&sink));
        let ord = weakly_acyclic_order(&sink).unwrap();
        assert_eq!(ord.states(), &[0, 1, 2]);
        let cycle = CompleteAutomaton::from_fn(5, 1, |q, _| (q + 1) % 5).unwrap();
        assert!(is_strongly_connected(&cycle));
    }
}
