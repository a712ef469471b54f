use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    NoNodes,

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("empty graph: no edges, so the modularity normalisation b is undefined")]
    EmptyGraph,

    #[error("induced subgraph has no edges")]
    EdgelessSubgraph,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension {n} exceeds the dense cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("all entries are identical; there is no two-cluster structure")]
    NoClusterStructure,

    #[error("community {0} is empty")]
    EmptyCommunity(u8),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unknown node id `{0}` in label file")]
    UnknownId(String),

    #[error("node `{0}` has no label")]
    MissingLabel(String),

    #[error("label file has more than two distinct labels (third: `{0}`)")]
    TooManyLabels(String),

    #[error("label file must contain exactly two distinct labels, found {0}")]
    TooFewLabels(usize),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
