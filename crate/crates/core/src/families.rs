//! Generators for the extremal families.
//!
//! States are emitted in the documented monotone (or topological) order, so
//! the identity permutation is a valid witness order for every generator
//! that claims monotonicity.

use crate::automaton::{Acceptor, CompleteAutomaton, PartialAutomaton, State, StateOrder, StateSet, Word};
use crate::classify::check_monotonic;
use crate::error::{Error, Result};

/// An automaton with a distinguished subset and, where known, a word
/// synchronizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetInstance {
    pub automaton: CompleteAutomaton,
    pub subset: StateSet,
    pub witness: Option<Word>,
    /// Human-readable state names, index-aligned.
    pub labels: Vec<String>,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn positive(what: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be positive")));
    }
    Ok(())
}

/// Largest `l` accepted by [`pairwise_gap_family`].
pub const MAX_GAP_BITS: usize = 12;

/// Binary weakly acyclic automaton with `2^l` sources in which every pair
/// of sources is synchronizable but the sources have rank `2^l - 1`.
///
/// Source `s_i` reaches `f` by `bin(i)` and `t_i` by any other word of
/// length `l`; `t_i` in turn reaches `f` by `bin(i)` and the sink `p_i`
/// otherwise. Each of the two stages is a matched track and a deviated
/// track of `l - 1` intermediate states each.
pub fn pairwise_gap_family(l: usize) -> Result<SubsetInstance> {
    positive("l", l)?;
    if l > MAX_GAP_BITS {
        return Err(Error::InvalidParameter(format!(
            "l = {l} exceeds the limit {MAX_GAP_BITS}"
        )));
    }
    let k = 1usize << l;
    let block = 3 + 4 * (l - 1);
    let n = k * block + 1;
    let f = n - 1;
    let mut table = vec![0; n * 2];
    let mut labels = vec![String::new(); n];
    labels[f] = "f".into();
    let mut set = |q: State, x: usize, t: State| table[q * 2 + x] = t;

    for i in 0..k {
        let base = i * block;
        let bits: Vec<usize> = (0..l).rev().map(|b| (i >> b) & 1).collect();
        let s = base;
        let t = base + 1 + 2 * (l - 1);
        let p = base + block - 1;
        labels[s] = format!("s{i}");
        labels[t] = format!("t{i}");
        labels[p] = format!("p{i}");
        for (stage, (src, fail)) in [(s, t), (t, p)].into_iter().enumerate() {
            // matched(d) / deviated(d) for 1 <= d <= l-1 sit right after src
            let matched = |d: usize| src + 2 * d - 1;
            let deviated = |d: usize| src + 2 * d;
            for d in 1..l {
                labels[matched(d)] = format!("m{i}.{stage}.{d}");
                labels[deviated(d)] = format!("n{i}.{stage}.{d}");
            }
            for (d, &bit) in bits.iter().enumerate() {
                let last = d + 1 == l;
                let on_match = if last { f } else { matched(d + 1) };
                let on_miss = if last { fail } else { deviated(d + 1) };
                let here = if d == 0 { src } else { matched(d) };
                for x in 0..2 {
                    set(here, x, if x == bit { on_match } else { on_miss });
                }
                if d > 0 {
                    for x in 0..2 {
                        set(deviated(d), x, on_miss);
                    }
                }
            }
        }
        set(p, 0, p);
        set(p, 1, p);
    }
    set(f, 0, f);
    set(f, 1, f);

    let automaton = CompleteAutomaton::new(n, 2, table)?.with_names(names(&["0", "1"]))?;
    let subset = StateSet::from_states(n, (0..k).map(|i| i * block))?;
    Ok(SubsetInstance {
        automaton,
        subset,
        witness: None,
        labels,
    })
}

/// `(2m+3)`-state automaton over `{0, 1, 2}` whose pair
/// `S = {q_2, q_{2m+2}}` needs a word of length exactly `m^2 + m`.
///
/// States are `q_1..q_{2m+3}` at indices `0..2m+2`; `q_1`, `q_{m+2}` and
/// `q_{2m+3}` are sinks.
pub fn ternary_family(m: usize) -> Result<SubsetInstance> {
    positive("m", m)?;
    let n = 2 * m + 3;
    // 1-based indices inside, shifted on output
    let delta = |i: usize, x: usize| -> usize {
        if i == 1 || i == m + 2 || i == n {
            return i;
        }
        if (2..=m + 1).contains(&i) {
            return [i + 1, i, 1][x];
        }
        if i == m + 3 {
            return [2 * m + 2, m + 3, m + 2][x];
        }
        // m + 4 <= i <= 2m + 2
        [n, i - 1, i][x]
    };
    let automaton =
        CompleteAutomaton::from_fn(n, 3, |q, x| delta(q + 1, x) - 1)?.with_names(names(&["0", "1", "2"]))?;
    let subset = StateSet::from_states(n, [1, 2 * m + 1])?;
    let mut w = vec![1; m - 1];
    for _ in 0..m {
        w.push(0);
        w.extend(std::iter::repeat_n(1, m - 1));
    }
    w.push(2);
    Ok(SubsetInstance {
        automaton,
        subset,
        witness: Some(Word::new(w)),
        labels: (1..=n).map(|i| format!("q{i}")).collect(),
    })
}

/// `(4m+3)`-state binary automaton whose pair `S = {q_{m+2}, q_{4m+2}}`
/// needs a word of length at least `m^2`; the witness
/// `(1^{m-1} 0)^m 1^{2m}` has length `m^2 + 2m`.
pub fn binary_family(m: usize) -> Result<SubsetInstance> {
    positive("m", m)?;
    let n = 4 * m + 3;
    let delta = |i: usize, x: usize| -> usize {
        if i == 1 || i == 2 * m + 2 || i == n {
            return i;
        }
        if x == 1 {
            return i - 1;
        }
        match i {
            i if (2..=m + 1).contains(&i) => i + m,
            i if (m + 2..=2 * m + 1).contains(&i) => 2 * m + 2,
            i if (2 * m + 3..=3 * m + 3).contains(&i) => m + i - 1,
            _ => n, // 3m + 4 <= i <= 4m + 2
        }
    };
    let automaton = CompleteAutomaton::from_fn(n, 2, |q, x| delta(q + 1, x) - 1)?.with_names(names(&["0", "1"]))?;
    let subset = StateSet::from_states(n, [m + 1, 4 * m + 1])?;
    let mut w = Vec::new();
    for _ in 0..m {
        w.extend(std::iter::repeat_n(1, m - 1));
        w.push(0);
    }
    w.extend(std::iter::repeat_n(1, 2 * m));
    Ok(SubsetInstance {
        automaton,
        subset,
        witness: Some(Word::new(w)),
        labels: (1..=n).map(|i| format!("q{i}")).collect(),
    })
}

fn counter_letter_names(k: usize, with_reset: bool) -> Vec<String> {
    let mut v: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    if with_reset {
        v.push("a".into());
    }
    v
}

/// `k` three-state acceptors over `a_1..a_k` imitating a binary counter:
/// the shortest word accepted by all of them has length `2^k - 1`.
///
/// In acceptor `i` the states are `f_i, s_i, t_i` at indices 0, 1, 2;
/// initial `s_i`, accepting `{t_i}`.
pub fn counter_acceptors(k: usize) -> Result<Vec<Acceptor>> {
    positive("k", k)?;
    (0..k)
        .map(|i| {
            let a = CompleteAutomaton::from_fn(3, k, |q, x| match (q, x) {
                (1, x) if x == i => 2,
                (1, x) if x > i => 0,
                (2, x) if x > i => 1,
                (q, _) => q,
            })?
            .with_names(counter_letter_names(k, false))?;
            Acceptor::new(a, 1, StateSet::singleton(3, 2)?)
        })
        .collect()
}

/// Counter base for [`counter_partial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterBase {
    Binary,
    Ternary,
}

impl TryFrom<u32> for CounterBase {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        match b {
            2 => Ok(CounterBase::Binary),
            3 => Ok(CounterBase::Ternary),
            _ => Err(Error::InvalidParameter(format!("counter base must be 2 or 3, got {b}"))),
        }
    }
}

/// Carefully synchronizing partial automaton imitating a counter with `k`
/// digits over letters `a_1..a_k` (indices `0..k`) plus `a` (index `k`).
///
/// Binary: digit `i` has states `s_i < t_i`; this is the acceptor family
/// with every `f_i` removed. Ternary: digit `i` has `z_i < o_i < w_i`;
/// `a_i` counts up and saturates at `w_i`, a higher letter resets `w_i` to
/// `z_i` and is undefined on `z_i`, `o_i`, lower letters fix the digit.
/// In both cases `a` sends each top state to the top state of the last
/// digit and is undefined elsewhere.
pub fn counter_partial(k: usize, base: CounterBase) -> Result<PartialAutomaton> {
    positive("k", k)?;
    let width = match base {
        CounterBase::Binary => 2,
        CounterBase::Ternary => 3,
    };
    let top = width - 1;
    let n = width * k;
    let last_top = n - 1;
    PartialAutomaton::from_fn(n, k + 1, |q, x| {
        let (digit, v) = (q / width, q % width);
        if x == k {
            return (v == top).then_some(last_top);
        }
        let base_q = digit * width;
        if x == digit {
            Some(base_q + (v + 1).min(top))
        } else if x > digit {
            (v == top).then_some(base_q)
        } else {
            Some(q)
        }
    })?
    .with_names(counter_letter_names(k, true))
}

/// Deletes the first and last state under `ord`, leaving transitions into
/// them undefined. Remaining states are renumbered by their position in
/// `ord`, so the identity order is monotone on the result.
pub fn trim_to_partial(a: &CompleteAutomaton, ord: &StateOrder) -> Result<PartialAutomaton> {
    if a.n() < 3 {
        return Err(Error::InvalidParameter("trimming needs at least 3 states".into()));
    }
    if !check_monotonic(a, ord)? {
        return Err(Error::InvalidOrder("order is not preserved by the automaton".into()));
    }
    let n = a.n();
    let seq = ord.states();
    let new_of = |q: State| {
        let p = ord.position(q);
        (p != 0 && p != n - 1).then(|| p - 1)
    };
    let mut out = PartialAutomaton::from_fn(n - 2, a.k(), |i, x| new_of(a.delta(seq[i + 1], x)))?;
    if let Some(names) = a.names() {
        out = out.with_names(names.to_vec())?;
    }
    Ok(out)
}
