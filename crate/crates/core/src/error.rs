use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node index {node} out of range for a hypergraph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("hyperedge {0:?} has fewer than two nodes")]
    EdgeTooSmall(Vec<usize>),

    #[error("hyperedge {0:?} repeats a node")]
    RepeatedNode(Vec<usize>),

    #[error("hyperedge {0:?} occurs more than once")]
    DuplicateEdge(Vec<usize>),

    #[error("matrix has {len} entries, expected {n}x{n}")]
    BadShape { n: usize, len: usize },

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("diagonal entry {0} is non-zero but the matrix was declared without diagonal")]
    UnexpectedDiagonal(usize),

    #[error("row sum of node {0} is not divisible by k-1; no k-uniform hypergraph realizes it")]
    NonDivisibleRowSum(usize),

    #[error("uniform size must be at least 2, got {0}")]
    BadUniformSize(usize),

    #[error("edge-node ({0}, {1}) has no candidate cliques under the constraints")]
    EmptyCandidates(usize, usize),

    #[error("at most {max} nodes are supported, got {n}")]
    TooManyNodes { n: usize, max: usize },

    #[error("{what}: {count} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("invalid constraints: {0}")]
    InvalidConstraints(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("rejection sampling gave up after {0} attempts")]
    RejectionBudgetExceeded(u64),

    #[error("jaccard distance is undefined for two empty hypergraphs")]
    BothEmpty,

    #[error("series must have equal lengths of at least 2 (got {0} and {1})")]
    BadSeries(usize, usize),

    #[error("rank correlation is undefined for a constant series")]
    Degenerate,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
