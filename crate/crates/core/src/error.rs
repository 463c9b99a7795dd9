use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("node set is empty")]
    EmptyNodeSet,

    #[error("restriction needs a nonempty proper subset of the ground set")]
    InvalidRestriction,

    #[error("{what}: size {size} exceeds the cap of {cap}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("source and sink terminal sets overlap")]
    OverlappingTerminals,

    #[error("linear program is infeasible (certificate rows {rows:?})")]
    Infeasible { rows: Vec<usize> },

    #[error("cutting-plane loop exceeded {0} added cuts")]
    IterationLimit(usize),

    #[error("extreme point has no free edge with value at least 1/2")]
    AssertionHalfEdge,

    #[error("solution cost {cost} exceeds twice the LP bound {lp_bound}")]
    ApproxBoundViolated { cost: String, lp_bound: String },

    #[error("graph is not {0}-edge-connected")]
    NotKConnected(u32),

    #[error("{0}")]
    Unsupported(&'static str),

    #[error("invalid requirement: {0}")]
    InvalidRequirement(String),
}
