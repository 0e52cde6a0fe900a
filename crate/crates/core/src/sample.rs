//! Seeded random instances for property suites.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{CompleteAutomaton, State};
use crate::error::Result;
use crate::road::Digraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random non-decreasing map `[0, n) -> [0, n)`.
///
/// Monotone maps correspond to multisets of size `n` over `n` values; a
/// multiset is drawn as an `n`-subset of `2n - 1` stars-and-bars positions.
pub fn monotone_map<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<State> {
    let mut pos = index::sample(rng, 2 * n - 1, n).into_vec();
    pos.sort_unstable();
    pos.into_iter().enumerate().map(|(i, p)| p - i).collect()
}

/// Random automaton that is monotone under the identity order, one
/// uniform monotone map per letter. Deterministic in `seed`.
pub fn sample_monotonic(n: usize, k: usize, seed: u64) -> Result<CompleteAutomaton> {
    let mut r = rng(seed);
    let maps: Vec<Vec<State>> = (0..k).map(|_| monotone_map(n, &mut r)).collect();
    CompleteAutomaton::from_fn(n, k, |q, x| maps[x][q])
}

/// A uniformly random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<State> {
    let mut p: Vec<State> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random strongly connected digraph with out-degree `k`, by rejection.
pub fn sample_strongly_connected<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Digraph {
    loop {
        let arcs = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect();
        let g = Digraph::new(arcs).expect("sampled arcs are in range");
        if g.is_strongly_connected() {
            return g;
        }
    }
}
