use thiserror::Error;

/// Errors produced by the library.
///
/// `BudgetExceeded` is distinct from a negative answer: an exhaustive search
/// that runs out of budget never reports "no".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid state order: {0}")]
    InvalidOrder(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid CNF: {0}")]
    InvalidCnf(String),

    #[error("search budget exceeded ({0})")]
    BudgetExceeded(String),

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,

    #[error("subset is empty")]
    EmptySubset,

    #[error("pairwise synchronization did not extend to the subset; the automaton is not monotonic")]
    NotMonotonicEvidence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
