use crate::graph::Vertex;

/// Errors raised by the constructions and oracles in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("graphs have different vertex counts ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("blocks overlap at vertex {0}")]
    BlockOverlap(Vertex),
    #[error("exact oracle is capped at {cap} vertices, graph has {n}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("bad family spec: {0}")]
    BadSpec(&'static str),
    #[error("need {needed} vertices but only {available} are available")]
    InsufficientVertices { needed: usize, available: usize },
    #[error("gamma must lie in (0, 1/12), got {0}")]
    GammaOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("path of {available} vertices cannot hold {needed}")]
    PathTooShort { needed: usize, available: usize },
    #[error("branch set {0} is not connected")]
    DisconnectedBranchSet(usize),
    #[error("peeled core empty in round {round} after discarding {removed} vertices")]
    CoreEmpty { round: usize, removed: usize },
    #[error("star packing found {achieved} stars, {required} required")]
    PackingShortfall { achieved: usize, required: usize },
    #[error("decomposition failed: {0}")]
    DecompositionFailed(&'static str),
    #[error("partition must split the parts into two nonempty sides")]
    TrivialPartition,
    #[error("minimum degree {min_degree} is below {required}")]
    MinDegreeTooLow { min_degree: usize, required: usize },
}
