//! Polynomial-time subset synchronization for monotonic automata.
//!
//! Everything here works on the pair automaton (all 1- and 2-element
//! subsets) and never needs the preserved order. In a monotonic automaton a
//! set is synchronizing exactly when each of its pairs is, and a shortest
//! word for the extreme pair is a shortest word for the whole set. Since
//! the extreme pair is unknown without the order, the shortest pair words
//! of all pairs are tried and checked against the set.

use std::collections::VecDeque;

use crate::automaton::{CompleteAutomaton, Letter, State, StateSet, Word};
use crate::error::{Error, Result};

/// Index of the unordered pair `{p, q}` among the `n(n+1)/2` nodes.
#[inline]
fn pair_index(n: usize, p: State, q: State) -> usize {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    p * n - p * (p + 1) / 2 + q
}

/// The subautomaton of the power automaton on 1- and 2-element subsets.
#[derive(Debug, Clone)]
pub struct PairAutomatonGraph {
    n: usize,
    k: usize,
    pairs: Vec<(State, State)>,
    succ: Vec<u32>,
}

impl PairAutomatonGraph {
    pub fn new(a: &CompleteAutomaton) -> Self {
        let (n, k) = (a.n(), a.k());
        let pairs: Vec<(State, State)> = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
        let mut succ = Vec::with_capacity(pairs.len() * k);
        for &(p, q) in &pairs {
            for x in 0..k {
                succ.push(pair_index(n, a.delta(p, x), a.delta(q, x)) as u32);
            }
        }
        PairAutomatonGraph { n, k, pairs, succ }
    }

    pub fn node_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn node(&self, p: State, q: State) -> usize {
        pair_index(self.n, p, q)
    }

    pub fn pair(&self, node: usize) -> (State, State) {
        self.pairs[node]
    }

    pub fn successor(&self, node: usize, x: Letter) -> usize {
        self.succ[node * self.k + x] as usize
    }

    fn is_singleton(&self, node: usize) -> bool {
        let (p, q) = self.pairs[node];
        p == q
    }

    /// Shortest, lexicographically least word from `{p, q}` to a singleton.
    pub fn shortest_word(&self, p: State, q: State) -> Option<Word> {
        let src = self.node(p, q);
        if self.is_singleton(src) {
            return Some(Word::empty());
        }
        let mut parent: Vec<Option<(u32, Letter)>> = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for x in 0..self.k {
                let v = self.successor(u, x);
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                parent[v] = Some((u as u32, x));
                if self.is_singleton(v) {
                    let mut letters = Vec::new();
                    let mut cur = v;
                    while let Some((pu, px)) = parent[cur] {
                        letters.push(px);
                        cur = pu as usize;
                    }
                    letters.reverse();
                    return Some(Word::new(letters));
                }
                queue.push_back(v);
            }
        }
        None
    }
}

/// The set of synchronizable pairs, as a symmetric boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncPairs {
    n: usize,
    sync: Vec<bool>,
}

impl SyncPairs {
    pub fn contains(&self, p: State, q: State) -> bool {
        self.sync[pair_index(self.n, p, q)]
    }

    /// Synchronizable pairs `(p, q)` with `p <= q`, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (State, State)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |p| (p..n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.contains(p, q))
    }
}

/// All pairs from which a singleton is reachable, by one breadth-first
/// search on the reversed pair automaton started from every singleton.
pub fn sync_pairs(a: &CompleteAutomaton) -> SyncPairs {
    let g = PairAutomatonGraph::new(a);
    let nodes = g.node_count();
    let mut start = vec![0usize; nodes + 1];
    for u in 0..nodes {
        for x in 0..g.k {
            start[g.successor(u, x) + 1] += 1;
        }
    }
    for i in 0..nodes {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut preds = vec![0u32; start[nodes]];
    for u in 0..nodes {
        for x in 0..g.k {
            let v = g.successor(u, x);
            preds[fill[v]] = u as u32;
            fill[v] += 1;
        }
    }
    let mut sync = vec![false; nodes];
    let mut queue: Vec<usize> = (0..g.n).map(|q| g.node(q, q)).collect();
    for &s in &queue {
        sync[s] = true;
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &u in &preds[start[v]..start[v + 1]] {
            if !sync[u as usize] {
                sync[u as usize] = true;
                queue.push(u as usize);
            }
        }
    }
    SyncPairs { n: g.n, sync }
}

/// Decides whether `s` is synchronizing, assuming the automaton is
/// monotonic: true iff every pair of `s` is synchronizable.
pub fn is_sync_set_monotonic(a: &CompleteAutomaton, s: &StateSet) -> Result<bool> {
    a.check_set(s)?;
    if s.len() <= 1 {
        return Ok(true);
    }
    let pairs = sync_pairs(a);
    let members = s.to_vec();
    Ok(members
        .iter()
        .enumerate()
        .all(|(i, &p)| members[i + 1..].iter().all(|&q| pairs.contains(p, q))))
}

/// Shortest word merging `p` and `q`, lexicographically least among
/// shortest; empty when `p == q`.
pub fn shortest_pair_word(a: &CompleteAutomaton, p: State, q: State) -> Result<Option<Word>> {
    for s in [p, q] {
        if s >= a.n() {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: s,
                bound: a.n(),
            });
        }
    }
    Ok(PairAutomatonGraph::new(a).shortest_word(p, q))
}

fn shorter(candidate: &Word, best: &Option<Word>) -> bool {
    match best {
        None => true,
        Some(b) => (candidate.len(), candidate.letters()) < (b.len(), b.letters()),
    }
}

/// Shortest word synchronizing `s` in a monotonic automaton.
///
/// For each pair of states the shortest pair word is computed; those that
/// synchronize `s` are candidates and the shortest (then lexicographically
/// least) candidate is returned. If every pair of `s` is synchronizable but
/// no candidate synchronizes `s`, the automaton cannot be monotonic and
/// [`Error::NotMonotonicEvidence`] is returned.
pub fn shortest_sync_word_monotonic(a: &CompleteAutomaton, s: &StateSet) -> Result<Option<Word>> {
    a.check_set(s)?;
    if s.len() <= 1 {
        return Ok(Some(Word::empty()));
    }
    let g = PairAutomatonGraph::new(a);
    let pairs = sync_pairs(a);
    let members = s.to_vec();
    let pairwise = members
        .iter()
        .enumerate()
        .all(|(i, &p)| members[i + 1..].iter().all(|&q| pairs.contains(p, q)));
    if !pairwise {
        return Ok(None);
    }
    let mut best: Option<Word> = None;
    for (p, q) in pairs.iter().filter(|&(p, q)| p < q) {
        let w = g.shortest_word(p, q).expect("pair is synchronizable");
        if !shorter(&w, &best) {
            continue;
        }
        if a.image_unchecked(s, w.letters()).len() == 1 {
            best = Some(w);
        }
    }
    match best {
        Some(w) => Ok(Some(w)),
        None => Err(Error::NotMonotonicEvidence),
    }
}

/// A largest synchronizing set of a monotonic automaton with a word
/// synchronizing it.
///
/// Each synchronizable pair contributes the set of all states its shortest
/// word sends to the pair's common target. Ties go to the
/// lexicographically smallest pair.
pub fn max_sync_set_monotonic(a: &CompleteAutomaton) -> (StateSet, Word) {
    let g = PairAutomatonGraph::new(a);
    let pairs = sync_pairs(a);
    let mut best = (
        StateSet::singleton(a.n(), 0).expect("automaton has a state"),
        Word::empty(),
    );
    for (p, q) in pairs.iter().filter(|&(p, q)| p < q) {
        let w = g.shortest_word(p, q).expect("pair is synchronizable");
        let target = w.iter().fold(p, |s, x| a.delta(s, x));
        let set = StateSet::from_states(
            a.n(),
            (0..a.n()).filter(|&s| w.iter().fold(s, |s, x| a.delta(s, x)) == target),
        )
        .expect("states are in range");
        if set.len() > best.0.len() {
            best = (set, w);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_indexing_is_dense() {
        let n = 5;
        let mut seen = vec![false; n * (n + 1) / 2];
        for p in 0..n {
            for q in p..n {
                let i = pair_index(n, p, q);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(i, pair_index(n, q, p));
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn pair_graph_shape() {
        let a = CompleteAutomaton::from_fn(4, 3, |q, x| (q + x) % 4).unwrap();
        let g = PairAutomatonGraph::new(&a);
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.succ.len(), 30);
    }

    #[test]
    fn singletons_always_synchronizable() {
        let a = CompleteAutomaton::new(3, 1, vec![1, 2, 0]).unwrap();
        let pairs = sync_pairs(&a);
        for q in 0..3 {
            assert!(pairs.contains(q, q));
        }
        assert!(!pairs.contains(0, 1));
        assert_eq!(shortest_pair_word(&a, 2, 2).unwrap(), Some(Word::empty()));
        assert_eq!(shortest_pair_word(&a, 0, 2).unwrap(), None);
        assert!(shortest_pair_word(&a, 0, 3).is_err());
    }

    #[test]
    fn constant_automaton_max_set_is_everything() {
        let a = CompleteAutomaton::from_fn(5, 2, |_, _| 0).unwrap();
        let (set, w) = max_sync_set_monotonic(&a);
        assert_eq!(set, StateSet::full(5));
        assert_eq!(w, Word::new(vec![0]));
    }

    #[test]
    fn identity_automaton_max_set_is_singleton() {
        let a = CompleteAutomaton::from_fn(4, 2, |q, _| q).unwrap();
        let (set, w) = max_sync_set_monotonic(&a);
        assert_eq!(set.len(), 1);
        assert!(w.is_empty());
    }

    #[test]
    fn non_monotonic_input_is_detected() {
        // 0,1,2 pairwise synchronizable; every letter merges exactly one pair
        // into a distinct sink, so {0,1,2} has rank 2.
        // states 0,1,2 plus sinks 3,4,5
        let table = vec![
            3, 5, 0, // 0: a->3 (with 1), b->5 (with 2), c stays
            3, 1, 4, // 1: a->3 (with 0), c->4 (with 2)
            2, 5, 4, // 2: b->5 (with 0), c->4 (with 1)
            3, 3, 3, 4, 4, 4, 5, 5, 5,
        ];
        let a = CompleteAutomaton::new(6, 3, table).unwrap();
        let s = StateSet::from_states(6, [0, 1, 2]).unwrap();
        assert!(is_sync_set_monotonic(&a, &s).unwrap());
        assert_eq!(shortest_sync_word_monotonic(&a, &s), Err(Error::NotMonotonicEvidence));
    }
}
