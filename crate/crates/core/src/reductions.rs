//! CNF formulas and the gadgets that encode them as monotonic, weakly
//! acyclic automata: clause gadgets `A_j`, the timer `T`, and their
//! combinations for intersection, set rank and careful synchronization.

use crate::automaton::{Acceptor, CompleteAutomaton, Letter, PartialAutomaton, State, StateOrder, StateSet, Word};
use crate::error::{parse_err, Error, Result};

/// Letter indices shared by the three-letter gadgets.
pub const ZERO: Letter = 0;
pub const ONE: Letter = 1;
pub const RESET: Letter = 2;
/// Extra letters of the careful-synchronization instance.
pub const RESTART: Letter = 2;
pub const FINISH: Letter = 3;

/// A formula in conjunctive normal form. Literals are signed, 1-based
/// variable indices: `3` is `x_3`, `-3` is its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf {
    nvars: usize,
    clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(nvars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidCnf("formula needs at least one variable".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            validate_clause(c, nvars).map_err(|e| match e {
                Error::InvalidCnf(m) => Error::InvalidCnf(format!("clause {}: {m}", j + 1)),
                other => other,
            })?;
        }
        Ok(Cnf { nvars, clauses })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Number of clauses not satisfied by `assignment` (`assignment[i]` is `x_{i+1}`).
    pub fn count_unsatisfied(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| !clause_satisfied(c, assignment)).count()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.count_unsatisfied(assignment) == 0
    }

    /// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, and zero-terminated clauses that may span lines.
    pub fn parse_dimacs(text: &str) -> Result<Cnf> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(parse_err(line_no, "header must be `p cnf <vars> <clauses>`"));
                }
                let nv = toks[2].parse().map_err(|_| parse_err(line_no, "bad variable count"))?;
                let nc = toks[3].parse().map_err(|_| parse_err(line_no, "bad clause count"))?;
                header = Some((nv, nc));
                continue;
            }
            let Some((nv, _)) = header else {
                return Err(parse_err(line_no, "clause before `p cnf` header"));
            };
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(parse_err(line_no, "empty clause"));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    if lit.unsigned_abs() as usize > nv {
                        return Err(parse_err(
                            line_no,
                            format!("variable {} exceeds declared {nv}", lit.abs()),
                        ));
                    }
                    current.push(lit);
                }
            }
        }
        let Some((nv, nc)) = header else {
            return Err(parse_err(1, "missing `p cnf` header"));
        };
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != nc {
            return Err(Error::InvalidCnf(format!(
                "header declares {nc} clauses, found {}",
                clauses.len()
            )));
        }
        Cnf::new(nv, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.nvars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

fn validate_clause(c: &[i32], nvars: usize) -> Result<()> {
    if c.is_empty() {
        return Err(Error::InvalidCnf("empty clause".into()));
    }
    for &l in c {
        if l == 0 || l.unsigned_abs() as usize > nvars {
            return Err(Error::InvalidCnf(format!(
                "literal {l} out of range for {nvars} variables"
            )));
        }
    }
    Ok(())
}

fn clause_satisfied(c: &[i32], assignment: &[bool]) -> bool {
    c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
}

/// Whether setting `x_var = value` satisfies the clause.
fn literal_hit(c: &[i32], var: usize, value: bool) -> bool {
    c.iter().any(|&l| l.unsigned_abs() as usize == var && (l > 0) == value)
}

fn abc_names() -> Vec<String> {
    ["0", "1", "r"].iter().map(|s| s.to_string()).collect()
}

fn careful_names() -> Vec<String> {
    ["0", "1", "y", "z"].iter().map(|s| s.to_string()).collect()
}

/// Index layout of a clause gadget over `n` variables, which is also its
/// monotone order: `s, q_1, q_2, q'_2, ..., q_n, q'_n, q_{n+1}, t`.
#[derive(Debug, Clone, Copy)]
pub struct ClauseLayout {
    pub n: usize,
}

impl ClauseLayout {
    pub fn states(&self) -> usize {
        2 * self.n + 2
    }
    pub fn s(&self) -> State {
        0
    }
    /// `q_i`, `1 <= i <= n + 1`.
    pub fn q(&self, i: usize) -> State {
        if i == 1 {
            1
        } else {
            2 * i - 2
        }
    }
    /// `q'_i`, `2 <= i <= n`.
    pub fn q_primed(&self, i: usize) -> State {
        2 * i - 1
    }
    pub fn t(&self) -> State {
        2 * self.n + 1
    }

    pub fn labels(&self) -> Vec<String> {
        let mut v = vec!["s".to_string(), "q1".to_string()];
        for i in 2..=self.n {
            v.push(format!("q{i}"));
            v.push(format!("q'{i}"));
        }
        v.push(format!("q{}", self.n + 1));
        v.push("t".into());
        v
    }

    /// Target of a clause-gadget state under 0/1 (excluding `s`, which loops).
    fn bit_step(&self, clause: &[i32], q: State, x: Letter) -> State {
        let n = self.n;
        if q == self.t() || q == self.q(n + 1) {
            return self.t();
        }
        if q == self.q(1) || q.is_multiple_of(2) {
            let i = if q == 1 { 1 } else { (q + 2) / 2 };
            if literal_hit(clause, i, x == ONE) {
                if i == n {
                    self.t()
                } else {
                    self.q_primed(i + 1)
                }
            } else {
                self.q(i + 1)
            }
        } else {
            let i = q.div_ceil(2);
            if i == n {
                self.t()
            } else {
                self.q_primed(i + 1)
            }
        }
    }
}

/// The clause automaton `A_j` over `{0, 1, r}` with initial `q_1` and
/// accepting `{t}`. A word `z_1 ... z_n` leads from `q_1` to `t` iff the
/// assignment `x_i = z_i` satisfies the clause; `r` sends everything but
/// `t` to the rejecting sink `s`.
pub fn clause_gadget(clause: &[i32], n: usize) -> Result<Acceptor> {
    validate_clause(clause, n)?;
    let lay = ClauseLayout { n };
    let a = CompleteAutomaton::from_fn(lay.states(), 3, |q, x| {
        if q == lay.s() {
            lay.s()
        } else if x == RESET {
            if q == lay.t() {
                lay.t()
            } else {
                lay.s()
            }
        } else {
            lay.bit_step(clause, q, x)
        }
    })?
    .with_names(abc_names())?;
    Acceptor::new(a, lay.q(1), StateSet::singleton(lay.states(), lay.t())?)
}

/// Index layout of the timer: `a, p_1, ..., p_{n+1}, b`.
#[derive(Debug, Clone, Copy)]
pub struct TimerLayout {
    pub n: usize,
}

impl TimerLayout {
    pub fn states(&self) -> usize {
        self.n + 3
    }
    pub fn a(&self) -> State {
        0
    }
    pub fn p(&self, i: usize) -> State {
        i
    }
    pub fn b(&self) -> State {
        self.n + 2
    }
    pub fn labels(&self) -> Vec<String> {
        let mut v = vec!["a".to_string()];
        v.extend((1..=self.n + 1).map(|i| format!("p{i}")));
        v.push("b".into());
        v
    }
}

/// The timer `T` over `{0, 1, r}`: accepts exactly the words with `r`
/// somewhere among the first `n + 1` letters.
pub fn timer_gadget(n: usize) -> Result<Acceptor> {
    if n == 0 {
        return Err(Error::InvalidParameter("timer needs at least one variable".into()));
    }
    let lay = TimerLayout { n };
    let a = CompleteAutomaton::from_fn(lay.states(), 3, |q, x| {
        if q == lay.a() || q == lay.b() {
            q
        } else if x == RESET {
            lay.a()
        } else if q == lay.p(n + 1) {
            lay.b()
        } else {
            q + 1
        }
    })?
    .with_names(abc_names())?;
    Acceptor::new(a, lay.p(1), StateSet::singleton(lay.states(), lay.a())?)
}

/// All clause gadgets followed by the timer. A common accepted word exists
/// iff the formula is satisfiable.
pub fn sat_to_intersection(cnf: &Cnf) -> Result<Vec<Acceptor>> {
    let mut out = cnf
        .clauses()
        .iter()
        .map(|c| clause_gadget(c, cnf.nvars()))
        .collect::<Result<Vec<_>>>()?;
    out.push(timer_gadget(cnf.nvars())?);
    Ok(out)
}

/// The rank instance: for each clause a copy of `A_j` and of `T`, with `t`
/// of `A_j` identified with `a` of `T_j`. The subset holds every `q_1` and
/// `p_1`; its rank is `m + h` for `h` the minimum number of unsatisfied
/// clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInstance {
    pub automaton: CompleteAutomaton,
    pub subset: StateSet,
    /// Monotone order; equal to the identity by construction.
    pub order: StateOrder,
    pub labels: Vec<String>,
}

pub fn max3sat_to_rank(cnf: &Cnf) -> Result<RankInstance> {
    let n = cnf.nvars();
    let lay = ClauseLayout { n };
    let tim = TimerLayout { n };
    // block: clause gadget (t last, shared with the timer's a), then p_1..p_{n+1}, b
    let block = lay.states() + n + 2;
    let m = cnf.clauses().len();
    if m == 0 {
        return Err(Error::InvalidCnf("formula has no clauses".into()));
    }
    let total = block * m;
    let mut table = vec![0; total * 3];
    let mut labels = Vec::with_capacity(total);
    let mut subset = Vec::new();
    for (j, clause) in cnf.clauses().iter().enumerate() {
        let gadget = clause_gadget(clause, n)?;
        let off = j * block;
        let t = off + lay.t();
        let p = |i: usize| t + i;
        let b = t + n + 2;
        for q in 0..lay.states() {
            for x in 0..3 {
                table[(off + q) * 3 + x] = off + gadget.automaton.delta(q, x);
            }
        }
        for i in 1..=n + 1 {
            let next = if i == n + 1 { b } else { p(i + 1) };
            table[p(i) * 3] = next;
            table[p(i) * 3 + 1] = next;
            table[p(i) * 3 + 2] = t;
        }
        table[b * 3..b * 3 + 3].fill(b);
        subset.push(off + lay.q(1));
        subset.push(p(1));
        labels.extend(lay.labels().into_iter().map(|l| {
            if l == "t" {
                format!("t=a#{}", j + 1)
            } else {
                format!("{l}#{}", j + 1)
            }
        }));
        labels.extend(tim.labels().into_iter().skip(1).map(|l| format!("{l}#{}", j + 1)));
    }
    let automaton = CompleteAutomaton::new(total, 3, table)?.with_names(abc_names())?;
    Ok(RankInstance {
        automaton,
        subset: StateSet::from_states(total, subset)?,
        order: StateOrder::identity(total),
        labels,
    })
}

/// The careful-synchronization instance over `{0, 1, y, z}` with its
/// block order `A'_1 < ... < A'_m < T' < f` (the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarefulInstance {
    pub automaton: PartialAutomaton,
    pub order: StateOrder,
    pub labels: Vec<String>,
}

/// Builds the careful-synchronization instance: each `A'_j` is `A_j`
/// restricted to `{0, 1}` without `s`, `T'` is `T` restricted to `{0, 1}`
/// without `a` and `b`, plus a fresh state `f`. `y` restarts every block
/// at its initial state; `z` is defined only on each `t`, on `p_{n+1}` and
/// on `f`, sending them to `f`. `f` is fixed by `0`, `1` and `y`.
pub fn sat_to_careful(cnf: &Cnf) -> Result<CarefulInstance> {
    let n = cnf.nvars();
    let lay = ClauseLayout { n };
    let block = lay.states() - 1;
    let m = cnf.clauses().len();
    let timer_off = m * block;
    let f = timer_off + n + 1;
    let total = f + 1;
    let mut table: Vec<Option<State>> = vec![None; total * 4];
    let mut labels = Vec::with_capacity(total);
    for (j, clause) in cnf.clauses().iter().enumerate() {
        validate_clause(clause, n)?;
        let off = j * block;
        // gadget index g (1..=2n+1) lives at off + g - 1
        for g in 1..lay.states() {
            let q = off + g - 1;
            for x in [ZERO, ONE] {
                table[q * 4 + x] = Some(off + lay.bit_step(clause, g, x) - 1);
            }
            table[q * 4 + RESTART] = Some(off);
        }
        table[(off + lay.t() - 1) * 4 + FINISH] = Some(f);
        labels.extend(lay.labels().into_iter().skip(1).map(|l| format!("{l}#{}", j + 1)));
    }
    for i in 1..=n + 1 {
        let q = timer_off + i - 1;
        if i <= n {
            table[q * 4 + ZERO] = Some(q + 1);
            table[q * 4 + ONE] = Some(q + 1);
        } else {
            table[q * 4 + FINISH] = Some(f);
        }
        table[q * 4 + RESTART] = Some(timer_off);
        labels.push(format!("p{i}"));
    }
    for x in 0..4 {
        table[f * 4 + x] = Some(f);
    }
    labels.push("f".into());
    let automaton = PartialAutomaton::new(total, 4, table)?.with_names(careful_names())?;
    Ok(CarefulInstance {
        automaton,
        order: StateOrder::identity(total),
        labels,
    })
}

/// Reads the assignment `x_i = z_i` off the first `n` letters of `w`,
/// after dropping one leading `skip` letter if given and present. Returns
/// `None` unless those letters are all 0/1.
pub fn decode_assignment(w: &Word, n: usize, skip: Option<Letter>) -> Option<Vec<bool>> {
    let mut letters = w.letters();
    if let (Some(y), Some(&first)) = (skip, letters.first()) {
        if first == y {
            letters = &letters[1..];
        }
    }
    if letters.len() < n {
        return None;
    }
    letters[..n]
        .iter()
        .map(|&x| match x {
            ZERO => Some(false),
            ONE => Some(true),
            _ => None,
        })
        .collect()
}
