//! Subset synchronization in deterministic finite automata, with a focus on
//! monotonic automata.
//!
//! * [`automaton`], [`format`]: data model and the text file format.
//! * [`classify`]: monotonicity (check and search), weak acyclicity,
//!   strong connectivity.
//! * [`sync_poly`]: polynomial algorithms for monotonic automata that do
//!   not need the preserved order.
//! * [`oracle`]: exact exhaustive searches used as ground truth.
//! * [`families`], [`reductions`]: extremal families and CNF gadgets.
//! * [`road`]: period partitions and subset road coloring.

pub mod automaton;
pub mod classify;
pub mod error;
pub mod families;
pub mod format;
pub mod oracle;
pub mod reductions;
pub mod road;
pub mod sample;
pub mod sync_poly;

pub use automaton::{
    Acceptor, CompleteAutomaton, Letter, PartialAutomaton, State, StateOrder, StateSet, Transitions, Word,
};
pub use error::{Error, Result};
pub use format::{AnyAutomaton, AutomatonDoc};
pub use oracle::{Budget, RankResult};
