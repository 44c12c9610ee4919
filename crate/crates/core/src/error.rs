use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("part {0:?} does not induce a connected subgraph")]
    DisconnectedPart(Vec<usize>),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid layered decomposition: {0}")]
    InvalidLrs(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("empty node set given to the LCA closure")]
    EmptyNodeSet,

    #[error("family oracle returned {member:?}, which is not inside the queried set")]
    InconsistentOracle { member: Vec<usize> },

    #[error("invalid R-sets: {0}")]
    InvalidRSets(String),

    #[error("bound `{bound}` violated: {value} > {limit}")]
    BoundViolation {
        bound: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("backend `{backend}` produced an invalid coloring: {reason}")]
    Backend { backend: String, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

/// Runtime size bounds: a violation fails hard in debug builds and is only
/// logged in release builds.
pub(crate) fn check_bound(bound: &'static str, value: usize, limit: usize) -> Result<()> {
    if value <= limit {
        return Ok(());
    }
    if cfg!(debug_assertions) {
        Err(Error::BoundViolation { bound, value, limit })
    } else {
        log::warn!("bound `{bound}` violated: {value} > {limit}");
        Ok(())
    }
}
