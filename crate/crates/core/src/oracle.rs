//! Exact exponential-time reference searches over subset and product
//! spaces. Every returned word is shortest and, among shortest words,
//! lexicographically least by letter index.

use std::collections::HashMap;
use std::hash::Hash;

use crate::automaton::{Acceptor, CompleteAutomaton, Letter, PartialAutomaton, State, StateSet, Word};
use crate::error::{Error, Result};
use crate::reductions::Cnf;

/// Limits for exhaustive searches. Exceeding either is an error, never a
/// wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of distinct search nodes stored.
    pub max_nodes: usize,
    /// Approximate cap on search memory in bytes.
    pub max_bytes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 1 << 24,
            max_bytes: 1 << 30,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: usize) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

/// Search statistics, reported by the CLI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub bytes: usize,
}

/// Per-node bookkeeping overhead used in the memory estimate.
const NODE_OVERHEAD: usize = 48;

/// Breadth-first search tree with parent links `(parent, letter)`.
struct Tree<N> {
    nodes: Vec<N>,
    parent: Vec<(u32, Letter)>,
    index: HashMap<N, u32>,
    bytes: usize,
    budget: Budget,
}

impl<N: Clone + Eq + Hash> Tree<N> {
    fn new(root: N, root_bytes: usize, budget: Budget) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Tree {
            nodes: vec![root],
            parent: vec![(u32::MAX, 0)],
            index,
            bytes: root_bytes + NODE_OVERHEAD,
            budget,
        }
    }

    /// Adds `node` unless already present; returns its id when new.
    fn discover(&mut self, node: N, node_bytes: usize, from: usize, x: Letter) -> Result<Option<usize>> {
        if self.index.contains_key(&node) {
            return Ok(None);
        }
        let id = self.nodes.len();
        self.bytes += 2 * node_bytes + NODE_OVERHEAD;
        if id >= self.budget.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "more than {} search nodes",
                self.budget.max_nodes
            )));
        }
        if self.bytes > self.budget.max_bytes {
            return Err(Error::BudgetExceeded(format!(
                "more than {} bytes of search state",
                self.budget.max_bytes
            )));
        }
        self.index.insert(node.clone(), id as u32);
        self.nodes.push(node);
        self.parent.push((from as u32, x));
        Ok(Some(id))
    }

    fn word_to(&self, mut id: usize) -> Word {
        let mut letters = Vec::new();
        while id != 0 {
            let (p, x) = self.parent[id];
            letters.push(x);
            id = p as usize;
        }
        letters.reverse();
        Word::new(letters)
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes.len(),
            bytes: self.bytes,
        }
    }
}

/// Generic shortest-path search. Letters are expanded in increasing order
/// and nodes are never overwritten, so the first goal discovered carries
/// the lexicographically least shortest word.
fn bfs<N, F, G, B>(
    root: N,
    letters: usize,
    size_of: B,
    step: F,
    is_goal: G,
    budget: Budget,
) -> Result<(Option<Word>, SearchStats)>
where
    N: Clone + Eq + Hash,
    F: Fn(&N, Letter) -> Option<N>,
    G: Fn(&N) -> bool,
    B: Fn(&N) -> usize,
{
    if is_goal(&root) {
        return Ok((
            Some(Word::empty()),
            SearchStats {
                nodes: 1,
                bytes: size_of(&root),
            },
        ));
    }
    let rb = size_of(&root);
    let mut tree = Tree::new(root, rb, budget);
    let mut head = 0;
    while head < tree.nodes.len() {
        for x in 0..letters {
            let Some(next) = step(&tree.nodes[head], x) else {
                continue;
            };
            let goal = is_goal(&next);
            let nb = size_of(&next);
            if let Some(id) = tree.discover(next, nb, head, x)? {
                if goal {
                    return Ok((Some(tree.word_to(id)), tree.stats()));
                }
            }
        }
        head += 1;
    }
    Ok((None, tree.stats()))
}

/// Shortest word mapping all of `s` to a single state, by breadth-first
/// search over images of `s`.
pub fn oracle_shortest_sync_word(a: &CompleteAutomaton, s: &StateSet, budget: Budget) -> Result<Option<Word>> {
    oracle_shortest_sync_word_stats(a, s, budget).map(|(w, _)| w)
}

pub fn oracle_shortest_sync_word_stats(
    a: &CompleteAutomaton,
    s: &StateSet,
    budget: Budget,
) -> Result<(Option<Word>, SearchStats)> {
    a.check_set(s)?;
    if s.len() <= 1 {
        return Ok((Some(Word::empty()), SearchStats::default()));
    }
    bfs(
        s.clone(),
        a.k(),
        StateSet::heap_bytes,
        |set, x| Some(a.step_set(set, x)),
        |set| set.len() == 1,
        budget,
    )
}

/// Minimum image size of a subset together with a word attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub witness: Word,
}

/// Rank of `s`: the smallest image size over all words. The witness is the
/// shortest, lexicographically least word attaining it.
pub fn oracle_rank(a: &CompleteAutomaton, s: &StateSet, budget: Budget) -> Result<RankResult> {
    oracle_rank_stats(a, s, budget).map(|(r, _)| r)
}

pub fn oracle_rank_stats(a: &CompleteAutomaton, s: &StateSet, budget: Budget) -> Result<(RankResult, SearchStats)> {
    a.check_set(s)?;
    if s.len() <= 1 {
        let r = RankResult {
            rank: s.len(),
            witness: Word::empty(),
        };
        return Ok((r, SearchStats::default()));
    }
    let mut tree = Tree::new(s.clone(), s.heap_bytes(), budget);
    let mut best = (s.len(), 0usize);
    let mut head = 0;
    'outer: while head < tree.nodes.len() {
        for x in 0..a.k() {
            let next = a.step_set(&tree.nodes[head], x);
            let size = next.len();
            let nb = next.heap_bytes();
            if let Some(id) = tree.discover(next, nb, head, x)? {
                if size < best.0 {
                    best = (size, id);
                    if size == 1 {
                        break 'outer;
                    }
                }
            }
        }
        head += 1;
    }
    let r = RankResult {
        rank: best.0,
        witness: tree.word_to(best.1),
    };
    Ok((r, tree.stats()))
}

/// Shortest carefully synchronizing word: starting from the full state
/// set, a letter may be applied only if it is defined on every current state.
pub fn oracle_careful_sync(a: &PartialAutomaton, budget: Budget) -> Result<Option<Word>> {
    oracle_careful_sync_stats(a, budget).map(|(w, _)| w)
}

pub fn oracle_careful_sync_stats(a: &PartialAutomaton, budget: Budget) -> Result<(Option<Word>, SearchStats)> {
    bfs(
        StateSet::full(a.n()),
        a.k(),
        StateSet::heap_bytes,
        |set, x| a.step_set(set, x),
        |set| set.len() == 1,
        budget,
    )
}

/// Shortest word accepted by every acceptor, by breadth-first search over
/// the product automaton.
pub fn oracle_intersection(acceptors: &[Acceptor], budget: Budget) -> Result<Option<Word>> {
    oracle_intersection_stats(acceptors, budget).map(|(w, _)| w)
}

pub fn oracle_intersection_stats(acceptors: &[Acceptor], budget: Budget) -> Result<(Option<Word>, SearchStats)> {
    let Some(first) = acceptors.first() else {
        return Err(Error::InvalidParameter("intersection of zero acceptors".into()));
    };
    let k = first.automaton.k();
    if acceptors.iter().any(|acc| acc.automaton.k() != k) {
        return Err(Error::InvalidParameter(
            "acceptors have different alphabet sizes".into(),
        ));
    }
    let root: Vec<State> = acceptors.iter().map(|acc| acc.initial).collect();
    let width = acceptors.len() * std::mem::size_of::<State>();
    bfs(
        root,
        k,
        |_| width,
        |tuple, x| {
            Some(
                tuple
                    .iter()
                    .zip(acceptors)
                    .map(|(&q, acc)| acc.automaton.delta(q, x))
                    .collect(),
            )
        },
        |tuple| tuple.iter().zip(acceptors).all(|(&q, acc)| acc.accepting.contains(q)),
        budget,
    )
}

/// Largest variable count accepted by [`oracle_min_unsat`].
pub const MAX_SWEEP_VARS: usize = 20;

/// Minimum number of unsatisfied clauses over all assignments.
pub fn oracle_min_unsat(cnf: &Cnf) -> Result<usize> {
    oracle_min_unsat_with_assignment(cnf).map(|(h, _)| h)
}

/// As [`oracle_min_unsat`], also returning the first assignment (in
/// binary counting order, `x_1` most significant) attaining the minimum.
pub fn oracle_min_unsat_with_assignment(cnf: &Cnf) -> Result<(usize, Vec<bool>)> {
    let n = cnf.nvars();
    if n > MAX_SWEEP_VARS {
        return Err(Error::BudgetExceeded(format!(
            "assignment sweep over {n} variables (limit {MAX_SWEEP_VARS})"
        )));
    }
    let mut best = (usize::MAX, Vec::new());
    for bits in 0u32..(1u32 << n) {
        let assignment: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect();
        let unsat = cnf.count_unsatisfied(&assignment);
        if unsat < best.0 {
            best = (unsat, assignment);
            if unsat == 0 {
                break;
            }
        }
    }
    Ok(best)
}

/// Largest state count accepted by [`sync_length_table`].
pub const MAX_TABLE_STATES: usize = 22;

/// Shortest synchronizing length of every subset at once, indexed by
/// bitmask (bit `q` set when state `q` is a member). Computed by reverse
/// breadth-first search from all singletons in the power automaton.
/// The empty set is never synchronizing.
pub fn sync_length_table(a: &CompleteAutomaton) -> Result<Vec<Option<u32>>> {
    let n = a.n();
    let k = a.k();
    if n > MAX_TABLE_STATES {
        return Err(Error::BudgetExceeded(format!(
            "subset table over {n} states (limit {MAX_TABLE_STATES})"
        )));
    }
    let size = 1usize << n;
    // image[mask * k + x]
    let mut image = vec![0u32; size * k];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        for x in 0..k {
            image[mask * k + x] = image[rest * k + x] | (1 << a.delta(low, x));
        }
    }
    // reverse adjacency in compressed form
    let mut start = vec![0u32; size + 1];
    for mask in 1..size {
        for x in 0..k {
            start[image[mask * k + x] as usize + 1] += 1;
        }
    }
    for i in 0..size {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut preds = vec![0u32; start[size] as usize];
    for mask in 1..size {
        for x in 0..k {
            let t = image[mask * k + x] as usize;
            preds[fill[t] as usize] = mask as u32;
            fill[t] += 1;
        }
    }
    drop(image);
    let mut dist = vec![None; size];
    let mut queue = Vec::with_capacity(size);
    for q in 0..n {
        dist[1 << q] = Some(0);
        queue.push(1u32 << q);
    }
    let mut head = 0;
    while head < queue.len() {
        let m = queue[head] as usize;
        let d = dist[m].expect("queued sets have a distance");
        for &p in &preds[start[m] as usize..start[m + 1] as usize] {
            if dist[p as usize].is_none() {
                dist[p as usize] = Some(d + 1);
                queue.push(p);
            }
        }
        head += 1;
    }
    Ok(dist)
}

/// Bitmask of a state set over at most 64 states.
pub fn mask_of(s: &StateSet) -> u64 {
    s.iter().fold(0u64, |m, q| m | 1 << q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_and_empty_sets() {
        let a = CompleteAutomaton::new(2, 1, vec![1, 0]).unwrap();
        let one = StateSet::singleton(2, 1).unwrap();
        assert_eq!(
            oracle_shortest_sync_word(&a, &one, Budget::default()).unwrap(),
            Some(Word::empty())
        );
        let r = oracle_rank(&a, &one, Budget::default()).unwrap();
        assert_eq!((r.rank, r.witness), (1, Word::empty()));
        assert_eq!(oracle_rank(&a, &StateSet::full(2), Budget::default()).unwrap().rank, 2);
        assert_eq!(
            oracle_shortest_sync_word(&a, &StateSet::full(2), Budget::default()).unwrap(),
            None
        );
    }

    #[test]
    fn careful_sync_none_when_letters_always_blocked() {
        // each letter is undefined on one of the two states
        let p = PartialAutomaton::new(2, 2, vec![None, Some(1), Some(0), None]).unwrap();
        assert_eq!(oracle_careful_sync(&p, Budget::default()).unwrap(), None);
        let single = PartialAutomaton::new(1, 1, vec![None]).unwrap();
        assert_eq!(
            oracle_careful_sync(&single, Budget::default()).unwrap(),
            Some(Word::empty())
        );
    }

    #[test]
    fn intersection_trivial_accepting_initial() {
        let a = CompleteAutomaton::new(2, 1, vec![1, 1]).unwrap();
        let acc = Acceptor::new(a, 0, StateSet::singleton(2, 0).unwrap()).unwrap();
        assert_eq!(
            oracle_intersection(&[acc], Budget::default()).unwrap(),
            Some(Word::empty())
        );
    }

    #[test]
    fn budget_is_an_error_not_an_answer() {
        // binary counter-like cycle: many reachable subsets
        let a = CompleteAutomaton::from_fn(10, 2, |q, x| {
            if x == 0 {
                (q + 1) % 10
            } else if q == 0 {
                1
            } else {
                q
            }
        })
        .unwrap();
        let r = oracle_shortest_sync_word(&a, &StateSet::full(10), Budget::nodes(5));
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
        let r = oracle_shortest_sync_word(
            &a,
            &StateSet::full(10),
            Budget {
                max_nodes: 1 << 20,
                max_bytes: 100,
            },
        );
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn cerny_automaton_matches_known_length() {
        // C_4: reset threshold (n-1)^2 = 9
        let n = 4;
        let a = CompleteAutomaton::from_fn(n, 2, |q, x| match x {
            0 => (q + 1) % n,
            _ => {
                if q == 0 {
                    1
                } else {
                    q
                }
            }
        })
        .unwrap();
        let w = oracle_shortest_sync_word(&a, &StateSet::full(n), Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.len(), 9);
        let table = sync_length_table(&a).unwrap();
        assert_eq!(table[(1 << n) - 1], Some(9));
        assert_eq!(table[0], None);
    }

    #[test]
    fn min_unsat_small_cases() {
        let cnf = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(oracle_min_unsat(&cnf).unwrap(), 1);
        let cnf = Cnf::new(1, vec![vec![1], vec![-1], vec![1]]).unwrap();
        assert_eq!(oracle_min_unsat(&cnf).unwrap(), 1);
        let cnf = Cnf::new(2, vec![vec![1, 2], vec![-1]]).unwrap();
        assert_eq!(oracle_min_unsat(&cnf).unwrap(), 0);
        let big = Cnf::new(21, vec![vec![1]]).unwrap();
        assert!(matches!(oracle_min_unsat(&big), Err(Error::BudgetExceeded(_))));
    }
}
