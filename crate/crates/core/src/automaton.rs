//! Complete and partial automata over indexed states and letters, together
//! with words, state subsets and linear state orders.

use std::fmt;

use crate::error::{Error, Result};

pub type State = usize;
pub type Letter = usize;

/// Read access to a (possibly partial) transition function.
pub trait Transitions {
    fn num_states(&self) -> usize;
    fn num_letters(&self) -> usize;
    /// Target of `q` under `x`, or `None` when undefined.
    ///
    /// Panics if `q` or `x` is out of range.
    fn step(&self, q: State, x: Letter) -> Option<State>;
}

fn check_dims(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("automaton needs at least one state".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("automaton needs at least one letter".into()));
    }
    Ok(())
}

fn check_names(names: &[String], k: usize) -> Result<()> {
    if names.len() != k {
        return Err(Error::InvalidParameter(format!(
            "expected {k} letter names, got {}",
            names.len()
        )));
    }
    Ok(())
}

/// Deterministic automaton with a total transition function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompleteAutomaton {
    n: usize,
    k: usize,
    table: Vec<State>,
    names: Option<Vec<String>>,
}

impl CompleteAutomaton {
    /// Builds an automaton from a row-major table: entry `q * k + x` is
    /// the target of `q` under `x`.
    pub fn new(n: usize, k: usize, table: Vec<State>) -> Result<Self> {
        check_dims(n, k)?;
        if table.len() != n * k {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * k
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= n) {
            return Err(Error::IndexOutOfRange {
                what: "target state",
                index: bad,
                bound: n,
            });
        }
        Ok(CompleteAutomaton {
            n,
            k,
            table,
            names: None,
        })
    }

    pub fn from_fn(n: usize, k: usize, f: impl Fn(State, Letter) -> State) -> Result<Self> {
        let table = (0..n)
            .flat_map(|q| (0..k).map(move |x| (q, x)))
            .map(|(q, x)| f(q, x))
            .collect();
        Self::new(n, k, table)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_names(&names, self.k)?;
        self.names = Some(names);
        Ok(self)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Unchecked transition lookup; panics on out-of-range arguments.
    #[inline]
    pub fn delta(&self, q: State, x: Letter) -> State {
        debug_assert!(x < self.k);
        self.table[q * self.k + x]
    }

    pub fn row(&self, q: State) -> &[State] {
        &self.table[q * self.k..(q + 1) * self.k]
    }

    fn check_state(&self, q: State) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: q,
                bound: self.n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        w.check(self.k)
    }

    pub(crate) fn check_set(&self, s: &StateSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(Error::InvalidParameter(format!(
                "subset over {} states used with a {}-state automaton",
                s.universe(),
                self.n
            )));
        }
        Ok(())
    }

    /// State reached from `q` by reading `w`.
    pub fn apply_word(&self, q: State, w: &Word) -> Result<State> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(w.iter().fold(q, |p, x| self.delta(p, x)))
    }

    /// Image of `s` under `w`.
    pub fn image_set(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        self.check_set(s)?;
        self.check_word(w)?;
        Ok(self.image_unchecked(s, w.letters()))
    }

    pub(crate) fn image_unchecked(&self, s: &StateSet, w: &[Letter]) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for q in s.iter() {
            out.insert(w.iter().fold(q, |p, &x| self.delta(p, x)));
        }
        out
    }

    pub(crate) fn step_set(&self, s: &StateSet, x: Letter) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for q in s.iter() {
            out.insert(self.delta(q, x));
        }
        out
    }

    /// Renames every state `q` to `perm[q]`.
    pub fn relabel(&self, perm: &[State]) -> Result<Self> {
        StateOrder::new(perm.to_vec())?;
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("relabeling has the wrong length".into()));
        }
        let mut table = vec![0; self.n * self.k];
        for q in 0..self.n {
            for x in 0..self.k {
                table[perm[q] * self.k + x] = perm[self.delta(q, x)];
            }
        }
        Ok(CompleteAutomaton {
            n: self.n,
            k: self.k,
            table,
            names: self.names.clone(),
        })
    }

    /// The same transitions viewed as a partial automaton with every entry defined.
    pub fn to_partial(&self) -> PartialAutomaton {
        PartialAutomaton {
            n: self.n,
            k: self.k,
            table: self.table.iter().map(|&t| Some(t)).collect(),
            names: self.names.clone(),
        }
    }
}

impl Transitions for CompleteAutomaton {
    fn num_states(&self) -> usize {
        self.n
    }

    fn num_letters(&self) -> usize {
        self.k
    }

    fn step(&self, q: State, x: Letter) -> Option<State> {
        assert!(x < self.k, "letter {x} out of range");
        Some(self.table[q * self.k + x])
    }
}

/// Deterministic automaton whose transition function may be undefined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialAutomaton {
    n: usize,
    k: usize,
    table: Vec<Option<State>>,
    names: Option<Vec<String>>,
}

impl PartialAutomaton {
    pub fn new(n: usize, k: usize, table: Vec<Option<State>>) -> Result<Self> {
        check_dims(n, k)?;
        if table.len() != n * k {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * k
            )));
        }
        if let Some(bad) = table.iter().flatten().find(|&&t| t >= n) {
            return Err(Error::IndexOutOfRange {
                what: "target state",
                index: *bad,
                bound: n,
            });
        }
        Ok(PartialAutomaton {
            n,
            k,
            table,
            names: None,
        })
    }

    pub fn from_fn(n: usize, k: usize, f: impl Fn(State, Letter) -> Option<State>) -> Result<Self> {
        let table = (0..n)
            .flat_map(|q| (0..k).map(move |x| (q, x)))
            .map(|(q, x)| f(q, x))
            .collect();
        Self::new(n, k, table)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_names(&names, self.k)?;
        self.names = Some(names);
        Ok(self)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn delta(&self, q: State, x: Letter) -> Option<State> {
        debug_assert!(x < self.k);
        self.table[q * self.k + x]
    }

    pub fn row(&self, q: State) -> &[Option<State>] {
        &self.table[q * self.k..(q + 1) * self.k]
    }

    /// Image of `s` under `w`, or `Ok(None)` when some prefix of `w` is
    /// undefined on the current set.
    pub fn partial_image_set(&self, s: &StateSet, w: &Word) -> Result<Option<StateSet>> {
        if s.universe() != self.n {
            return Err(Error::InvalidParameter(format!(
                "subset over {} states used with a {}-state automaton",
                s.universe(),
                self.n
            )));
        }
        w.check(self.k)?;
        let mut cur = s.clone();
        for x in w.iter() {
            match self.step_set(&cur, x) {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Image of `s` under one letter, `None` if the letter is undefined on some member.
    pub(crate) fn step_set(&self, s: &StateSet, x: Letter) -> Option<StateSet> {
        let mut out = StateSet::empty(self.n);
        for q in s.iter() {
            out.insert(self.delta(q, x)?);
        }
        Some(out)
    }

    /// Returns the complete automaton if every entry is defined.
    pub fn to_complete(&self) -> Option<CompleteAutomaton> {
        let table = self.table.iter().copied().collect::<Option<Vec<_>>>()?;
        Some(CompleteAutomaton {
            n: self.n,
            k: self.k,
            table,
            names: self.names.clone(),
        })
    }
}

impl Transitions for PartialAutomaton {
    fn num_states(&self) -> usize {
        self.n
    }

    fn num_letters(&self) -> usize {
        self.k
    }

    fn step(&self, q: State, x: Letter) -> Option<State> {
        assert!(x < self.k, "letter {x} out of range");
        self.table[q * self.k + x]
    }
}

/// A finite sequence of letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    fn check(&self, k: usize) -> Result<()> {
        match self.0.iter().find(|&&x| x >= k) {
            Some(&x) => Err(Error::IndexOutOfRange {
                what: "letter",
                index: x,
                bound: k,
            }),
            None => Ok(()),
        }
    }

    /// Space-separated letter names, or indices when no registry is given.
    pub fn render(&self, names: Option<&[String]>) -> String {
        let parts: Vec<String> = match names {
            Some(names) => self
                .0
                .iter()
                .map(|&x| names.get(x).cloned().unwrap_or_else(|| x.to_string()))
                .collect(),
            None => self.0.iter().map(|x| x.to_string()).collect(),
        };
        parts.join(" ")
    }

    /// Parses a space-separated word, resolving tokens against `names`
    /// first and falling back to numeric indices.
    pub fn parse(text: &str, names: Option<&[String]>) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let by_name = names.and_then(|ns| ns.iter().position(|n| n == tok));
            match by_name.or_else(|| tok.parse().ok()) {
                Some(x) => letters.push(x),
                None => return Err(Error::InvalidParameter(format!("unknown letter `{tok}`"))),
            }
        }
        Ok(Word(letters))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// A subset of the states `0..universe`, stored as a fixed-width bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    bits: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            universe,
            bits: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for q in 0..universe {
            s.insert(q);
        }
        s
    }

    pub fn singleton(universe: usize, q: State) -> Result<Self> {
        Self::from_states(universe, [q])
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = State>) -> Result<Self> {
        let mut s = Self::empty(universe);
        for q in states {
            if q >= universe {
                return Err(Error::IndexOutOfRange {
                    what: "state",
                    index: q,
                    bound: universe,
                });
            }
            s.insert(q);
        }
        Ok(s)
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64);
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.bits[0] = if universe == 64 {
                mask
            } else {
                mask & ((1u64 << universe) - 1)
            };
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, q: State) {
        debug_assert!(q < self.universe);
        self.bits[q / 64] |= 1 << (q % 64);
    }

    pub fn remove(&mut self, q: State) {
        self.bits[q / 64] &= !(1 << (q % 64));
    }

    #[inline]
    pub fn contains(&self, q: State) -> bool {
        q < self.universe && self.bits[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|q| other.contains(q))
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<State> {
        self.iter().collect()
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        self.bits.len() * 8
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A linear order `q_1 < q_2 < ... < q_n` of the states, stored as the
/// sequence of states from smallest to largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateOrder {
    seq: Vec<State>,
    pos: Vec<usize>,
}

impl StateOrder {
    pub fn new(seq: Vec<State>) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &q) in seq.iter().enumerate() {
            if q >= n {
                return Err(Error::InvalidOrder(format!("state {q} out of range for {n} states")));
            }
            if pos[q] != usize::MAX {
                return Err(Error::InvalidOrder(format!("state {q} appears twice")));
            }
            pos[q] = i;
        }
        Ok(StateOrder { seq, pos })
    }

    pub fn identity(n: usize) -> Self {
        StateOrder {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// States from smallest to largest.
    pub fn states(&self) -> &[State] {
        &self.seq
    }

    /// Rank of `q` in the order (0 for the smallest state).
    pub fn position(&self, q: State) -> usize {
        self.pos[q]
    }

    pub fn reversed(&self) -> StateOrder {
        let mut seq = self.seq.clone();
        seq.reverse();
        StateOrder::new(seq).expect("reversal of a permutation is a permutation")
    }
}

/// A complete automaton with an initial state and a set of accepting states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Acceptor {
    pub automaton: CompleteAutomaton,
    pub initial: State,
    pub accepting: StateSet,
}

impl Acceptor {
    pub fn new(automaton: CompleteAutomaton, initial: State, accepting: StateSet) -> Result<Self> {
        automaton.check_state(initial)?;
        automaton.check_set(&accepting)?;
        Ok(Acceptor {
            automaton,
            initial,
            accepting,
        })
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        let q = self.automaton.apply_word(self.initial, w)?;
        Ok(self.accepting.contains(q))
    }
}
