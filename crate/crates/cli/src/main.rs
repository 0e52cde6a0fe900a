use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{RunReport, Status};

/// Subset synchronization, careful synchronization and rank for monotonic
/// automata.
#[derive(Debug, Parser)]
#[command(name = "monosync", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of nodes stored by exhaustive searches.
    #[arg(long, global = true)]
    pub budget_nodes: Option<usize>,
    /// Approximate memory cap for exhaustive searches, in bytes.
    #[arg(long, global = true)]
    pub budget_mem: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Poly,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report monotonicity (with an order), weak acyclicity and strong connectivity.
    Classify { file: PathBuf },
    /// Decide whether a subset of a complete automaton is synchronizing.
    CheckSync(SubsetArgs),
    /// Find a shortest word synchronizing a subset.
    ShortestWord(SubsetArgs),
    /// Largest synchronizing subset of a monotonic automaton.
    MaxSubset { file: PathBuf },
    /// Rank of a subset: the smallest size of its image under any word.
    Rank {
        file: PathBuf,
        /// State indices, 0-based; defaults to the file's `subset:` line.
        #[arg(long, num_args = 1..)]
        subset: Option<Vec<usize>>,
    },
    /// Shortest carefully synchronizing word of a partial automaton.
    Careful { file: PathBuf },
    /// Shortest word accepted by every acceptor in the given files.
    Intersect {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Encode a DIMACS CNF formula as automata.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Decide which subsets of a digraph admit a synchronizing coloring.
    Roadcolor {
        file: PathBuf,
        /// Vertex indices, 0-based.
        #[arg(long, num_args = 1.., required = true)]
        subset: Vec<usize>,
        /// Also search for a witness coloring exhaustively.
        #[arg(long)]
        search: bool,
    },
    /// Compare the polynomial algorithms with the exhaustive searches on
    /// random monotonic automata.
    Selftest {
        /// Number of automata.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest number of states.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

#[derive(Debug, Args)]
pub struct SubsetArgs {
    pub file: PathBuf,
    /// State indices, 0-based; defaults to the file's `subset:` line.
    #[arg(long, num_args = 1..)]
    pub subset: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Method::Poly)]
    pub method: Method,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Weakly acyclic binary automaton with 2^l pairwise synchronizable sources of rank 2^l - 1.
    PairwiseGap {
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ternary monotonic family with shortest subset word m^2 + m.
    Ternary {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Binary monotonic family with shortest subset word at least m^2.
    Binary {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Counter constructions: k acceptors, or one partial automaton.
    Counter {
        #[arg(long)]
        k: usize,
        /// Emit k acceptors with a long shortest common word (default).
        #[arg(long, conflicts_with = "partial")]
        acceptors: bool,
        /// Emit a carefully synchronizing partial automaton.
        #[arg(long)]
        partial: bool,
        /// Counter base for `--partial`.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=3))]
        base: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Remove the least and greatest state of a monotonic automaton.
    Trim {
        file: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random automaton monotone under the identity order.
    Monotone {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random strongly connected digraph with uniform out-degree.
    Digraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Clause acceptors plus a timer; a common word exists iff satisfiable.
    SatIntersection(ReduceArgs),
    /// Subset whose rank is the clause count plus the minimum number of unsatisfied clauses.
    Max3satRank(ReduceArgs),
    /// Partial automaton that is carefully synchronizing iff satisfiable.
    SatCareful(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub cnf: PathBuf,
    /// Run the matching exhaustive search and decode the assignment.
    #[arg(long)]
    pub solve: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write the generated text to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let mut report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => RunReport::error(command.clone(), e.status(), e.to_string()),
    };
    report.command = command;
    if cli.global.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    if cli.global.json {
        println!("{}", report.to_json());
    } else if report.status == Status::Error {
        eprint!("{}", report.to_human());
    } else {
        print!("{}", report.to_human());
    }
    report.status.exit_code()
}
