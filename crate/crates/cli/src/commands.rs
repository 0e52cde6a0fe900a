use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use monosync::classify::{
    check_monotonic, find_monotonic_order, is_strongly_connected, weakly_acyclic_order, OrderSearch,
    DEFAULT_ORDER_BUDGET,
};
use monosync::families::{self, CounterBase, SubsetInstance};
use monosync::format::{parse_automaton, parse_documents, serialize_documents, AnyAutomaton, AutomatonDoc};
use monosync::oracle::{self, Budget};
use monosync::reductions::{self, decode_assignment, Cnf, RESTART};
use monosync::road::{self, Digraph, DEFAULT_COLORING_LIMIT};
use monosync::sample::{permutation, rng, sample_monotonic, sample_strongly_connected};
use monosync::sync_poly;
use monosync::{CompleteAutomaton, StateOrder, StateSet, Word};

use crate::report::{RunReport, Status};
use crate::{Cli, Command, GenCommand, Global, Method, OutArgs, ReduceArgs, ReduceCommand, SubsetArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: monosync::Error },
    #[error(transparent)]
    Lib(#[from] monosync::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Lib(monosync::Error::BudgetExceeded(_))
            | CliError::File {
                source: monosync::Error::BudgetExceeded(_),
                ..
            } => Status::BudgetExceeded,
            _ => Status::Error,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: monosync::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<AutomatonDoc> {
    let text = read(path)?;
    in_file(path, parse_automaton(&text))
}

fn complete(doc: &AutomatonDoc) -> Result<&CompleteAutomaton> {
    match &doc.automaton {
        AnyAutomaton::Complete(a) => Ok(a),
        AnyAutomaton::Partial(_) => Err(CliError::Usage(
            "this command needs a complete automaton (`dfa` header)".into(),
        )),
    }
}

fn subset_of(given: &Option<Vec<usize>>, doc: &AutomatonDoc, n: usize) -> Result<StateSet> {
    match (given, &doc.subset) {
        (Some(v), _) => Ok(StateSet::from_states(n, v.iter().copied())?),
        (None, Some(s)) => Ok(s.clone()),
        (None, None) => Err(CliError::Usage(
            "no --subset given and the file has no `subset:` line".into(),
        )),
    }
}

fn budget(g: &Global) -> Budget {
    let d = Budget::default();
    Budget {
        max_nodes: g.budget_nodes.unwrap_or(d.max_nodes),
        max_bytes: g.budget_mem.unwrap_or(d.max_bytes),
    }
}

fn order_budget(g: &Global) -> u64 {
    g.budget_nodes.map_or(DEFAULT_ORDER_BUDGET, |n| n as u64)
}

/// An order preserved by `a`: the file's `order:` line if it is valid,
/// otherwise one found by search.
fn monotone_order(a: &CompleteAutomaton, doc: &AutomatonDoc, g: &Global) -> Result<StateOrder> {
    if let Some(ord) = &doc.order {
        if check_monotonic(a, ord)? {
            return Ok(ord.clone());
        }
    }
    match find_monotonic_order(a, order_budget(g))? {
        OrderSearch::Found(ord) => Ok(ord),
        OrderSearch::NoOrder => Err(CliError::Usage(
            "automaton is not monotonic; use --method oracle".into(),
        )),
    }
}

fn set_json(s: &StateSet) -> Value {
    json!(s.to_vec())
}

fn emit(report: RunReport, text: String, out: &OutArgs) -> Result<RunReport> {
    match &out.output {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(report.detail("written", path.display().to_string()))
        }
        None => Ok(report.with_text(text)),
    }
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify { file } => classify(file, g),
        Command::CheckSync(args) => sync_word("check-sync", args, g),
        Command::ShortestWord(args) => sync_word("shortest-word", args, g),
        Command::MaxSubset { file } => max_subset(file, g),
        Command::Rank { file, subset } => rank(file, subset, g),
        Command::Careful { file } => careful(file, g),
        Command::Intersect { files } => intersect(files, g),
        Command::Gen(cmd) => gen(cmd, g),
        Command::Reduce(cmd) => reduce(cmd, g),
        Command::Roadcolor { file, subset, search } => roadcolor(file, subset, *search, g),
        Command::Selftest { count, max_n } => selftest(*count, *max_n, g),
    }
}

fn classify(file: &Path, g: &Global) -> Result<RunReport> {
    let doc = load(file)?;
    let search = match &doc.automaton {
        AnyAutomaton::Complete(a) => find_monotonic_order(a, order_budget(g)),
        AnyAutomaton::Partial(a) => find_monotonic_order(a, order_budget(g)),
    };
    let (monotonic, order) = match search {
        Ok(OrderSearch::Found(ord)) => (json!("yes"), json!(ord.states())),
        Ok(OrderSearch::NoOrder) => (json!("no"), json!("NONE")),
        Err(monosync::Error::BudgetExceeded(_)) => (json!("unknown"), json!("BUDGET")),
        Err(e) => return Err(e.into()),
    };
    let (acyclic, connected) = match &doc.automaton {
        AnyAutomaton::Complete(a) => (
            json!(weakly_acyclic_order(a).is_some()),
            json!(is_strongly_connected(a)),
        ),
        AnyAutomaton::Partial(_) => (Value::Null, Value::Null),
    };
    Ok(RunReport::new("classify", Status::Ok)
        .detail("states", doc.automaton.n())
        .detail("letters", doc.automaton.k())
        .detail("monotonic", monotonic)
        .detail("order", order)
        .detail("weakly_acyclic", acyclic)
        .detail("strongly_connected", connected))
}

fn sync_word(name: &str, args: &SubsetArgs, g: &Global) -> Result<RunReport> {
    let doc = load(&args.file)?;
    let a = complete(&doc)?;
    let s = subset_of(&args.subset, &doc, a.n())?;
    let (word, stats) = match args.method {
        Method::Poly => {
            monotone_order(a, &doc, g)?;
            (sync_poly::shortest_sync_word_monotonic(a, &s)?, None)
        }
        Method::Oracle => {
            let (w, st) = oracle::oracle_shortest_sync_word_stats(a, &s, budget(g))?;
            (w, Some(st))
        }
    };
    let method = match args.method {
        Method::Poly => "poly",
        Method::Oracle => "oracle",
    };
    let mut r = RunReport::new(name, if word.is_some() { Status::Ok } else { Status::No })
        .detail("method", method)
        .detail("subset", set_json(&s))
        .detail("synchronizing", word.is_some());
    if let Some(w) = &word {
        r = r.with_witness(w, a.names());
    }
    if let Some(st) = stats {
        r = r.with_stats(st);
    }
    Ok(r)
}

fn max_subset(file: &Path, g: &Global) -> Result<RunReport> {
    let doc = load(file)?;
    let a = complete(&doc)?;
    monotone_order(a, &doc, g)?;
    let (s, w) = sync_poly::max_sync_set_monotonic(a);
    Ok(RunReport::new("max-subset", Status::Ok)
        .detail("subset", set_json(&s))
        .detail("size", s.len())
        .with_witness(&w, a.names()))
}

fn rank(file: &Path, subset: &Option<Vec<usize>>, g: &Global) -> Result<RunReport> {
    let doc = load(file)?;
    let a = complete(&doc)?;
    let s = subset_of(subset, &doc, a.n())?;
    let (r, st) = oracle::oracle_rank_stats(a, &s, budget(g))?;
    let image = a.image_set(&s, &r.witness)?;
    Ok(RunReport::new("rank", Status::Ok)
        .detail("subset", set_json(&s))
        .detail("rank", r.rank)
        .detail("image", set_json(&image))
        .with_witness(&r.witness, a.names())
        .with_stats(st))
}

fn careful(file: &Path, g: &Global) -> Result<RunReport> {
    let doc = load(file)?;
    let p = doc.automaton.to_partial();
    let (w, st) = oracle::oracle_careful_sync_stats(&p, budget(g))?;
    let mut r = RunReport::new("careful", if w.is_some() { Status::Ok } else { Status::No })
        .detail("states", p.n())
        .with_stats(st);
    if let Some(w) = &w {
        r = r.with_witness(w, p.names());
    }
    Ok(r)
}

fn intersect(files: &[PathBuf], g: &Global) -> Result<RunReport> {
    let mut acceptors = Vec::new();
    for f in files {
        let text = read(f)?;
        for doc in in_file(f, parse_documents(&text))? {
            acceptors.push(in_file(f, doc.to_acceptor())?);
        }
    }
    let (w, st) = oracle::oracle_intersection_stats(&acceptors, budget(g))?;
    let mut r = RunReport::new("intersect", if w.is_some() { Status::Ok } else { Status::No })
        .detail("acceptors", acceptors.len())
        .with_stats(st);
    if let Some(w) = &w {
        r = r.with_witness(w, acceptors[0].automaton.names());
    }
    Ok(r)
}

fn instance_doc(title: String, inst: SubsetInstance) -> AutomatonDoc {
    let n = inst.automaton.n();
    let names = inst.automaton.names().map(|v| v.to_vec());
    let mut doc = AutomatonDoc::complete(inst.automaton)
        .with_comment(title)
        .with_comment(format!("states: {}", inst.labels.join(" ")));
    if let Some(w) = &inst.witness {
        doc = doc.with_comment(format!("witness: {}", w.render(names.as_deref())));
    }
    doc.subset = Some(inst.subset);
    doc.order = Some(StateOrder::identity(n));
    doc
}

fn gen(cmd: &GenCommand, g: &Global) -> Result<RunReport> {
    let (docs, out): (Vec<AutomatonDoc>, &OutArgs) = match cmd {
        GenCommand::PairwiseGap { l, out } => {
            let inst = families::pairwise_gap_family(*l)?;
            let mut doc = instance_doc(format!("pairwise gap family, l = {l}"), inst);
            doc.order = None;
            (vec![doc], out)
        }
        GenCommand::Ternary { m, out } => (
            vec![instance_doc(
                format!("ternary family, m = {m}"),
                families::ternary_family(*m)?,
            )],
            out,
        ),
        GenCommand::Binary { m, out } => (
            vec![instance_doc(
                format!("binary family, m = {m}"),
                families::binary_family(*m)?,
            )],
            out,
        ),
        GenCommand::Counter {
            k,
            acceptors: _,
            partial,
            base,
            out,
        } => {
            if *partial {
                let base = CounterBase::try_from(*base)?;
                let p = families::counter_partial(*k, base)?;
                let n = p.n();
                let mut doc =
                    AutomatonDoc::partial(p).with_comment(format!("{base:?} counter, k = {k}").to_lowercase());
                doc.order = Some(StateOrder::identity(n));
                (vec![doc], out)
            } else {
                let docs = families::counter_acceptors(*k)?
                    .iter()
                    .enumerate()
                    .map(|(i, acc)| {
                        let mut doc = AutomatonDoc::from_acceptor(acc)
                            .with_comment(format!("counter acceptor {} of {k}", i + 1))
                            .with_comment("states: f s t");
                        doc.order = Some(StateOrder::identity(3));
                        doc
                    })
                    .collect();
                (docs, out)
            }
        }
        GenCommand::Trim { file, out } => {
            let doc = load(file)?;
            let a = complete(&doc)?;
            let ord = monotone_order(a, &doc, g)?;
            let p = families::trim_to_partial(a, &ord)?;
            let n = p.n();
            let mut trimmed = AutomatonDoc::partial(p).with_comment(format!("trimmed from {}", file.display()));
            trimmed.order = Some(StateOrder::identity(n));
            (vec![trimmed], out)
        }
        GenCommand::Monotone { n, k, out } => {
            if *n == 0 || *k == 0 {
                return Err(CliError::Usage("--n and --k must be positive".into()));
            }
            let a = sample_monotonic(*n, *k, g.seed)?;
            let mut doc =
                AutomatonDoc::complete(a).with_comment(format!("random monotonic automaton, seed {}", g.seed));
            doc.order = Some(StateOrder::identity(*n));
            (vec![doc], out)
        }
        GenCommand::Digraph { n, k, out } => {
            if *n == 0 || *k == 0 {
                return Err(CliError::Usage("--n and --k must be positive".into()));
            }
            let d = sample_strongly_connected(*n, *k, &mut rng(g.seed));
            let text = format!("# random strongly connected digraph, seed {}\n{}", g.seed, d.to_text());
            return emit(RunReport::new("gen", Status::Ok), text, out);
        }
    };
    emit(RunReport::new("gen", Status::Ok), serialize_documents(&docs), out)
}

fn assignment_json(z: &[bool]) -> Value {
    json!(z.iter().map(|&b| b as u8).collect::<Vec<_>>())
}

fn reduce(cmd: &ReduceCommand, g: &Global) -> Result<RunReport> {
    let (args, name) = match cmd {
        ReduceCommand::SatIntersection(a) => (a, "sat-intersection"),
        ReduceCommand::Max3satRank(a) => (a, "max3sat-rank"),
        ReduceCommand::SatCareful(a) => (a, "sat-careful"),
    };
    let cnf = in_file(&args.cnf, Cnf::parse_dimacs(&read(&args.cnf)?))?;
    let n = cnf.nvars();
    let header = format!(
        "{name} encoding of {} ({n} variables, {} clauses)",
        args.cnf.display(),
        cnf.clauses().len()
    );
    let mut r = RunReport::new("reduce", Status::Ok);
    let text = match cmd {
        ReduceCommand::SatIntersection(_) => {
            let accs = reductions::sat_to_intersection(&cnf)?;
            if args.solve {
                let (w, st) = oracle::oracle_intersection_stats(&accs, budget(g))?;
                r = r.with_stats(st).detail("satisfiable", w.is_some());
                if let Some(w) = &w {
                    r = solved(r, &cnf, decode_assignment(w, n, None)).with_witness(w, accs[0].automaton.names());
                } else {
                    r.status = Status::No;
                }
            }
            let m = accs.len() - 1;
            let docs: Vec<AutomatonDoc> = accs
                .iter()
                .enumerate()
                .map(|(j, acc)| {
                    let what = if j < m {
                        format!("clause {}", j + 1)
                    } else {
                        "timer".into()
                    };
                    let mut doc = AutomatonDoc::from_acceptor(acc).with_comment(format!("{header}: {what}"));
                    doc.order = Some(StateOrder::identity(acc.automaton.n()));
                    doc
                })
                .collect();
            serialize_documents(&docs)
        }
        ReduceCommand::Max3satRank(_) => {
            let inst = reductions::max3sat_to_rank(&cnf)?;
            if args.solve {
                let (res, st) = oracle::oracle_rank_stats(&inst.automaton, &inst.subset, budget(g))?;
                let m = cnf.clauses().len();
                r = r
                    .with_stats(st)
                    .detail("rank", res.rank)
                    .detail("clauses", m)
                    .detail("min_unsatisfied", res.rank - m)
                    .with_witness(&res.witness, inst.automaton.names());
            }
            let mut doc = AutomatonDoc::complete(inst.automaton)
                .with_comment(header)
                .with_comment(format!("states: {}", inst.labels.join(" ")));
            doc.subset = Some(inst.subset);
            doc.order = Some(inst.order);
            serialize_documents(&[doc])
        }
        ReduceCommand::SatCareful(_) => {
            let inst = reductions::sat_to_careful(&cnf)?;
            if args.solve {
                let (w, st) = oracle::oracle_careful_sync_stats(&inst.automaton, budget(g))?;
                r = r.with_stats(st).detail("satisfiable", w.is_some());
                if let Some(w) = &w {
                    r = solved(r, &cnf, decode_assignment(w, n, Some(RESTART))).with_witness(w, inst.automaton.names());
                } else {
                    r.status = Status::No;
                }
            }
            let mut doc = AutomatonDoc::partial(inst.automaton)
                .with_comment(header)
                .with_comment(format!("states: {}", inst.labels.join(" ")));
            doc.order = Some(inst.order);
            serialize_documents(&[doc])
        }
    };
    reduce_output(r, text, args)
}

fn solved(r: RunReport, cnf: &Cnf, z: Option<Vec<bool>>) -> RunReport {
    match z {
        Some(z) => r
            .detail("satisfies", cnf.satisfied_by(&z))
            .detail("assignment", assignment_json(&z)),
        None => r.detail("assignment", Value::Null),
    }
}

fn reduce_output(r: RunReport, text: String, args: &ReduceArgs) -> Result<RunReport> {
    if args.solve && args.out.output.is_none() {
        return Ok(r);
    }
    emit(r, text, &args.out)
}

fn roadcolor(file: &Path, subset: &[usize], search: bool, g: &Global) -> Result<RunReport> {
    let d = in_file(file, Digraph::parse(&read(file)?))?;
    let s = StateSet::from_states(d.n(), subset.iter().copied())?;
    let part = road::period_partition(&d)?;
    let colorable = road::subset_colorable(&d, &s)?;
    let mut r = RunReport::new("roadcolor", if colorable { Status::Ok } else { Status::No })
        .detail("period", part.period)
        .detail("classes", json!(part.classes()))
        .detail("subset", set_json(&s))
        .detail("colorable", colorable);
    if search {
        match road::oracle_coloring_search(&d, &s, DEFAULT_COLORING_LIMIT, budget(g))? {
            Some(c) => {
                let a = c.automaton(&d)?;
                let w =
                    oracle::oracle_shortest_sync_word(&a, &s, budget(g))?.expect("coloring synchronizes the subset");
                let mut doc = AutomatonDoc::complete(a).with_comment(format!("coloring of {}", file.display()));
                doc.subset = Some(s.clone());
                r = r
                    .detail("search_agrees", colorable)
                    .with_witness(&w, None)
                    .with_text(serialize_documents(&[doc]));
            }
            None => r = r.detail("search_agrees", !colorable),
        }
    }
    Ok(r)
}

fn selftest(count: usize, max_n: usize, g: &Global) -> Result<RunReport> {
    if max_n == 0 || max_n > oracle::MAX_TABLE_STATES {
        return Err(CliError::Usage(format!(
            "--max-n must be in 1..={}",
            oracle::MAX_TABLE_STATES
        )));
    }
    let mut gen = rng(g.seed);
    let (mut subsets, mut decision_fail, mut length_fail, mut order_fail, mut max_fail) =
        (0u64, 0u64, 0u64, 0u64, 0u64);
    for _ in 0..count {
        let n = gen.gen_range(1..=max_n);
        let k = gen.gen_range(1..=3);
        let a = sample_monotonic(n, k, gen.gen())?.relabel(&permutation(n, &mut gen))?;
        match find_monotonic_order(&a, order_budget(g))? {
            OrderSearch::Found(ord) if check_monotonic(&a, &ord)? => {}
            _ => order_fail += 1,
        }
        let table = oracle::sync_length_table(&a)?;
        let masks: Vec<u64> = if n <= 8 {
            (1..1u64 << n).collect()
        } else {
            (0..64).map(|_| gen.gen_range(1..1u64 << n)).collect()
        };
        for mask in masks {
            let s = StateSet::from_mask(n, mask);
            let expected = table[mask as usize];
            subsets += 1;
            decision_fail += (sync_poly::is_sync_set_monotonic(&a, &s)? != expected.is_some()) as u64;
            let got = sync_poly::shortest_sync_word_monotonic(&a, &s)?.map(|w: Word| w.len() as u32);
            length_fail += (got != expected) as u64;
        }
        let best = (1..1u64 << n)
            .filter(|&m| table[m as usize].is_some())
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(1);
        let (set, w) = sync_poly::max_sync_set_monotonic(&a);
        max_fail += (set.len() != best || a.image_set(&set, &w)?.len() != 1) as u64;
    }
    let failures = decision_fail + length_fail + order_fail + max_fail;
    Ok(
        RunReport::new("selftest", if failures == 0 { Status::Ok } else { Status::No })
            .detail("automata", count)
            .detail("subsets", subsets)
            .detail("decision_mismatches", decision_fail)
            .detail("length_mismatches", length_fail)
            .detail("order_failures", order_fail)
            .detail("max_subset_failures", max_fail),
    )
}
