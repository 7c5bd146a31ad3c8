use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node ids must be dense 0..{expected}, found {found}")]
    SparseIds { expected: usize, found: NodeId },
    #[error("node {0} has a non-finite coordinate")]
    NonFinite(NodeId),
    #[error("network needs at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("radio radius must be positive")]
    BadRadius,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("node {0} is already part of the branch")]
    AlreadyPresent(NodeId),
    #[error("parent {0} is not part of the branch")]
    MissingParent(NodeId),
    #[error("parents of an extension must be distinct")]
    EqualParents,
    #[error("branch has no leaf (no extension performed yet)")]
    EmptyBranch,
    #[error("enumeration refused for {0} vertices (limit {1})")]
    TooLargeForEnumeration(usize, usize),
    #[error("graph with {got} vertices is too small for {k}-connectivity")]
    TooSmallForConnectivity { got: usize, k: usize },
    #[error("need at least {needed} beacons, got {got}")]
    TooFewBeacons { needed: usize, got: usize },
    #[error("beacon count {count} exceeds node count {nodes}")]
    TooManyBeacons { count: usize, nodes: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{protocol} is limited to {limit} nodes, network has {got}")]
    NetworkTooLarge {
        protocol: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("nothing to render: no final states")]
    EmptyStates,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
