//! Line-oriented text format for automata.
//!
//! ```text
//! # optional comments
//! dfa 3 2
//! 0 1
//! 1 2
//! 2 2
//! subset: 0 1
//! order: 0 1 2
//! names: a b
//! ```
//!
//! Partial automata use the `pdfa` header and `-` for undefined entries.
//! A single text may hold several automata; each starts at its header line
//! and full-line comments preceding a header belong to that automaton.

use std::fmt::Write as _;

use crate::automaton::{Acceptor, CompleteAutomaton, PartialAutomaton, State, StateOrder, StateSet};
use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAutomaton {
    Complete(CompleteAutomaton),
    Partial(PartialAutomaton),
}

impl AnyAutomaton {
    pub fn n(&self) -> usize {
        match self {
            AnyAutomaton::Complete(a) => a.n(),
            AnyAutomaton::Partial(a) => a.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AnyAutomaton::Complete(a) => a.k(),
            AnyAutomaton::Partial(a) => a.k(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        match self {
            AnyAutomaton::Complete(a) => a.names(),
            AnyAutomaton::Partial(a) => a.names(),
        }
    }

    /// Partial view of either variant.
    pub fn to_partial(&self) -> PartialAutomaton {
        match self {
            AnyAutomaton::Complete(a) => a.to_partial(),
            AnyAutomaton::Partial(a) => a.clone(),
        }
    }
}

/// An automaton together with the optional trailing metadata lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonDoc {
    pub automaton: AnyAutomaton,
    pub subset: Option<StateSet>,
    pub initial: Option<State>,
    pub accepting: Option<StateSet>,
    pub order: Option<StateOrder>,
    /// Full-line comments, without the leading `#`.
    pub comments: Vec<String>,
}

impl AutomatonDoc {
    pub fn new(automaton: AnyAutomaton) -> Self {
        AutomatonDoc {
            automaton,
            subset: None,
            initial: None,
            accepting: None,
            order: None,
            comments: Vec::new(),
        }
    }

    pub fn complete(a: CompleteAutomaton) -> Self {
        Self::new(AnyAutomaton::Complete(a))
    }

    pub fn partial(a: PartialAutomaton) -> Self {
        Self::new(AnyAutomaton::Partial(a))
    }

    pub fn from_acceptor(acc: &Acceptor) -> Self {
        let mut doc = Self::complete(acc.automaton.clone());
        doc.initial = Some(acc.initial);
        doc.accepting = Some(acc.accepting.clone());
        doc
    }

    pub fn with_comment(mut self, c: impl Into<String>) -> Self {
        self.comments.push(c.into());
        self
    }

    /// Interprets the document as an acceptor; requires a complete automaton
    /// and both `initial:` and `accepting:` lines.
    pub fn to_acceptor(&self) -> Result<Acceptor> {
        let AnyAutomaton::Complete(a) = &self.automaton else {
            return Err(Error::InvalidParameter("acceptor must be a complete automaton".into()));
        };
        let initial = self
            .initial
            .ok_or_else(|| Error::InvalidParameter("acceptor needs an `initial:` line".into()))?;
        let accepting = self
            .accepting
            .clone()
            .ok_or_else(|| Error::InvalidParameter("acceptor needs an `accepting:` line".into()))?;
        Acceptor::new(a.clone(), initial, accepting)
    }

    pub fn to_text(&self) -> String {
        serialize_automaton(self)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_index(tok: &str, line: usize, bound: usize, what: &str) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what} index, found `{tok}`")))?;
    if v >= bound {
        return Err(parse_err(line, format!("{what} {v} out of range (bound {bound})")));
    }
    Ok(v)
}

fn parse_states(rest: &str, line: usize, n: usize) -> Result<Vec<State>> {
    rest.split_whitespace()
        .map(|t| parse_index(t, line, n, "state"))
        .collect()
}

fn is_header(content: &str) -> bool {
    matches!(content.split_whitespace().next(), Some("dfa") | Some("pdfa"))
}

/// Parses every automaton in `text`.
pub fn parse_documents(text: &str) -> Result<Vec<AutomatonDoc>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut docs = Vec::new();
    let mut pending_comments = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let raw = lines[i];
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            if let Some(c) = raw.trim_start().strip_prefix('#') {
                pending_comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            }
            i += 1;
            continue;
        }
        if !is_header(content) {
            return Err(parse_err(
                i + 1,
                format!("expected `dfa` or `pdfa` header, found `{content}`"),
            ));
        }
        let (doc, next) = parse_one(&lines, i)?;
        let mut doc = doc;
        doc.comments = std::mem::take(&mut pending_comments);
        docs.push(doc);
        i = next;
    }
    if docs.is_empty() {
        return Err(parse_err(lines.len().max(1), "no automaton found"));
    }
    Ok(docs)
}

/// Parses a text holding exactly one automaton.
pub fn parse_automaton(text: &str) -> Result<AutomatonDoc> {
    let mut docs = parse_documents(text)?;
    if docs.len() != 1 {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected one automaton, found {}", docs.len()),
        });
    }
    Ok(docs.pop().unwrap())
}

fn parse_one(lines: &[&str], start: usize) -> Result<(AutomatonDoc, usize)> {
    let header_line = start + 1;
    let toks: Vec<&str> = strip_comment(lines[start]).split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_err(header_line, "header must be `dfa <n> <k>` or `pdfa <n> <k>`"));
    }
    let partial = toks[0] == "pdfa";
    let n: usize = toks[1]
        .parse()
        .map_err(|_| parse_err(header_line, format!("bad state count `{}`", toks[1])))?;
    let k: usize = toks[2]
        .parse()
        .map_err(|_| parse_err(header_line, format!("bad alphabet size `{}`", toks[2])))?;
    if n == 0 || k == 0 {
        return Err(parse_err(header_line, "state count and alphabet size must be positive"));
    }

    let mut table: Vec<Option<State>> = Vec::with_capacity(n * k);
    let mut i = start + 1;
    let mut rows = 0;
    while rows < n {
        let Some(raw) = lines.get(i) else {
            return Err(parse_err(i + 1, format!("expected {n} transition rows, found {rows}")));
        };
        let content = strip_comment(raw).trim();
        i += 1;
        if content.is_empty() {
            continue;
        }
        let entries: Vec<&str> = content.split_whitespace().collect();
        if entries.len() != k {
            return Err(parse_err(i, format!("expected {k} entries, found {}", entries.len())));
        }
        for e in entries {
            if e == "-" {
                if !partial {
                    return Err(parse_err(i, "undefined entry `-` in a complete automaton"));
                }
                table.push(None);
            } else {
                table.push(Some(parse_index(e, i, n, "target state")?));
            }
        }
        rows += 1;
    }

    let mut doc = if partial {
        AutomatonDoc::partial(PartialAutomaton::new(n, k, table)?)
    } else {
        let table = table
            .into_iter()
            .map(|t| t.expect("complete rows have no gaps"))
            .collect();
        AutomatonDoc::complete(CompleteAutomaton::new(n, k, table)?)
    };

    let mut names = None;
    while let Some(raw) = lines.get(i) {
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            if raw.trim_start().starts_with('#') {
                // Comment lines after the metadata belong to the next automaton.
                break;
            }
            i += 1;
            continue;
        }
        if is_header(content) {
            break;
        }
        let line_no = i + 1;
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, format!("unexpected line `{content}`")))?;
        match key.trim() {
            "subset" => doc.subset = Some(StateSet::from_states(n, parse_states(rest, line_no, n)?)?),
            "accepting" => doc.accepting = Some(StateSet::from_states(n, parse_states(rest, line_no, n)?)?),
            "initial" => {
                let v = parse_states(rest, line_no, n)?;
                if v.len() != 1 {
                    return Err(parse_err(line_no, "`initial:` takes exactly one state"));
                }
                doc.initial = Some(v[0]);
            }
            "order" => {
                let v = parse_states(rest, line_no, n)?;
                if v.len() != n {
                    return Err(parse_err(line_no, format!("order must list all {n} states")));
                }
                doc.order = Some(StateOrder::new(v).map_err(|e| parse_err(line_no, e.to_string()))?);
            }
            "names" => {
                let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if v.len() != k {
                    return Err(parse_err(
                        line_no,
                        format!("expected {k} letter names, found {}", v.len()),
                    ));
                }
                names = Some(v);
            }
            other => return Err(parse_err(line_no, format!("unknown key `{other}`"))),
        }
        i += 1;
    }
    if let Some(names) = names {
        doc.automaton = match doc.automaton {
            AnyAutomaton::Complete(a) => AnyAutomaton::Complete(a.with_names(names)?),
            AnyAutomaton::Partial(a) => AnyAutomaton::Partial(a.with_names(names)?),
        };
    }
    Ok((doc, i))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn serialize_automaton(doc: &AutomatonDoc) -> String {
    let mut out = String::new();
    for c in &doc.comments {
        let _ = writeln!(out, "# {c}");
    }
    match &doc.automaton {
        AnyAutomaton::Complete(a) => {
            let _ = writeln!(out, "dfa {} {}", a.n(), a.k());
            for q in 0..a.n() {
                let _ = writeln!(out, "{}", join(a.row(q)));
            }
        }
        AnyAutomaton::Partial(a) => {
            let _ = writeln!(out, "pdfa {} {}", a.n(), a.k());
            for q in 0..a.n() {
                let row = a.row(q).iter().map(|t| match t {
                    Some(t) => t.to_string(),
                    None => "-".to_string(),
                });
                let _ = writeln!(out, "{}", join(row));
            }
        }
    }
    if let Some(s) = &doc.subset {
        let _ = writeln!(out, "subset: {}", join(s.iter()));
    }
    if let Some(q) = doc.initial {
        let _ = writeln!(out, "initial: {q}");
    }
    if let Some(s) = &doc.accepting {
        let _ = writeln!(out, "accepting: {}", join(s.iter()));
    }
    if let Some(o) = &doc.order {
        let _ = writeln!(out, "order: {}", join(o.states()));
    }
    if let Some(names) = doc.automaton.names() {
        let _ = writeln!(out, "names: {}", names.join(" "));
    }
    out
}

/// Serializes several documents into one multi-automaton text.
pub fn serialize_documents(docs: &[AutomatonDoc]) -> String {
    docs.iter().map(serialize_automaton).collect::<Vec<_>>().join("\n")
}
