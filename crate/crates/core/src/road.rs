//! Subset road coloring: which subsets of a strongly connected,
//! uniform-out-degree digraph can be made synchronizing by some coloring.
//!
//! A subset admits a synchronizing coloring exactly when it lies inside one
//! class of the period partition.

use std::collections::VecDeque;
use std::fmt::Write as _;

use itertools::Itertools;

use crate::automaton::{CompleteAutomaton, Letter, StateSet};
use crate::classify::adjacency_strongly_connected;
use crate::error::{parse_err, Error, Result};
use crate::oracle::{oracle_shortest_sync_word, Budget};

/// Multigraph in which every vertex has exactly `k` out-arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    k: usize,
    arcs: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(arcs: Vec<Vec<usize>>) -> Result<Self> {
        let n = arcs.len();
        if n == 0 {
            return Err(Error::InvalidParameter("digraph needs at least one vertex".into()));
        }
        let k = arcs[0].len();
        if k == 0 {
            return Err(Error::InvalidParameter("out-degree must be positive".into()));
        }
        for (v, outs) in arcs.iter().enumerate() {
            if outs.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} has out-degree {}, expected {k}",
                    outs.len()
                )));
            }
            if let Some(&bad) = outs.iter().find(|&&t| t >= n) {
                return Err(Error::IndexOutOfRange {
                    what: "vertex",
                    index: bad,
                    bound: n,
                });
            }
        }
        Ok(Digraph { k, arcs })
    }

    pub fn n(&self) -> usize {
        self.arcs.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arcs(&self, v: usize) -> &[usize] {
        &self.arcs[v]
    }

    pub fn is_strongly_connected(&self) -> bool {
        adjacency_strongly_connected(&self.arcs)
    }

    /// Parses `digraph <n> <k>` followed by `n` lines of `k` targets.
    pub fn parse(text: &str) -> Result<Digraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty digraph file"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "digraph" {
            return Err(parse_err(hl, "header must be `digraph <n> <k>`"));
        }
        let n: usize = toks[1].parse().map_err(|_| parse_err(hl, "bad vertex count"))?;
        let k: usize = toks[2].parse().map_err(|_| parse_err(hl, "bad out-degree"))?;
        let mut arcs = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl + arcs.len() + 1, format!("expected {n} arc lines")))?;
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(ln, format!("bad target `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != k {
                return Err(parse_err(ln, format!("expected {k} targets, found {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(parse_err(ln, format!("target {bad} out of range (bound {n})")));
            }
            arcs.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "unexpected trailing line"));
        }
        Digraph::new(arcs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("digraph {} {}\n", self.n(), self.k);
        for row in &self.arcs {
            let _ = writeln!(out, "{}", row.iter().join(" "));
        }
        out
    }
}

/// Period `l` of the digraph and the class of every vertex; each arc goes
/// from class `c` to class `c + 1 mod l`. Vertex 0 is in class 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPartition {
    pub period: usize,
    pub class_of: Vec<usize>,
}

impl PeriodPartition {
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.period];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Computes the period partition from breadth-first depths rooted at
/// `root`: the period is the gcd of `depth(u) + 1 - depth(v)` over all arcs
/// and the class of a vertex is its depth modulo the period.
pub fn period_partition_from(g: &Digraph, root: usize) -> Result<PeriodPartition> {
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let n = g.n();
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in g.arcs(u) {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut period = 0;
    for u in 0..n {
        for &v in g.arcs(u) {
            period = gcd(period, (depth[u] + 1).abs_diff(depth[v]));
        }
    }
    let shift = depth[0] % period;
    let class_of = depth.iter().map(|&d| (d + period - shift) % period).collect();
    Ok(PeriodPartition { period, class_of })
}

pub fn period_partition(g: &Digraph) -> Result<PeriodPartition> {
    period_partition_from(g, 0)
}

/// True iff some coloring of `g` makes `s` synchronizing, i.e. iff all of
/// `s` lies in one period class.
pub fn subset_colorable(g: &Digraph, s: &StateSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let part = period_partition(g)?;
    let mut classes = s.iter().map(|v| part.class_of[v]);
    let first = classes.next().expect("subset is non-empty");
    Ok(classes.all(|c| c == first))
}

/// For every vertex, the letter carried by each of its out-arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub letters: Vec<Vec<Letter>>,
}

impl Coloring {
    /// The automaton in which vertex `v` reads `letters[v][i]` along arc `i`.
    pub fn automaton(&self, g: &Digraph) -> Result<CompleteAutomaton> {
        let mut table = vec![0; g.n() * g.k()];
        for v in 0..g.n() {
            let mut used = vec![false; g.k()];
            for (i, &x) in self.letters[v].iter().enumerate() {
                if x >= g.k() || used[x] {
                    return Err(Error::InvalidParameter(format!(
                        "coloring at vertex {v} is not a bijection"
                    )));
                }
                used[x] = true;
                table[v * g.k() + x] = g.arcs(v)[i];
            }
        }
        CompleteAutomaton::new(g.n(), g.k(), table)
    }
}

/// Default limit on the number of colorings tried by
/// [`oracle_coloring_search`].
pub const DEFAULT_COLORING_LIMIT: u128 = 1 << 20;

/// Tries every coloring in lexicographic order (vertex 0 most significant,
/// per-vertex permutations in lexicographic order) and returns the first
/// one under which `s` is synchronizing.
pub fn oracle_coloring_search(g: &Digraph, s: &StateSet, limit: u128, budget: Budget) -> Result<Option<Coloring>> {
    let n = g.n();
    let k = g.k();
    let perms: Vec<Vec<Letter>> = (0..k).permutations(k).collect();
    let total = (perms.len() as u128).checked_pow(n as u32);
    if total.is_none_or(|t| t > limit) {
        return Err(Error::BudgetExceeded(format!(
            "({k}!)^{n} colorings exceeds the limit {limit}"
        )));
    }
    let mut digits = vec![0usize; n];
    loop {
        let coloring = Coloring {
            letters: digits.iter().map(|&d| perms[d].clone()).collect(),
        };
        let a = coloring.automaton(g)?;
        if oracle_shortest_sync_word(&a, s, budget)?.is_some() {
            return Ok(Some(coloring));
        }
        // odometer, last vertex least significant
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < perms.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}
