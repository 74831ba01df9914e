use thiserror::Error;

/// Errors produced by the bit-matrix algebra, the oracle and the algorithm factory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix (rank {rank} of {dim}){}", context.as_deref().map(|c| format!(" at {c}")).unwrap_or_default())]
    Singular {
        rank: usize,
        dim: usize,
        context: Option<String>,
    },

    #[error("{what} out of range: {value} not in {range}")]
    Range {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("size guard exceeded: n = {n} > {limit} ({what}; raise WHT_MAX_N to override)")]
    Guard {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("sequence is not a fast WHT algorithm: {0}")]
    NotMember(String),

    #[error("precondition violated: {0}")]
    Condition(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn range(what: &'static str, value: impl TryInto<i64>, lo: usize, hi: usize) -> Self {
        Error::Range {
            what,
            value: value.try_into().unwrap_or(i64::MAX),
            range: format!("[{lo}, {hi}]"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
