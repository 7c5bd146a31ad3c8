//! Geometric network model and the combinatorial structures built on it.

mod branch;
mod constraint;
pub mod flow;
mod geometry;
mod network;
mod topology;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use branch::Branch;
pub use constraint::{to_constraint_graph, ConstraintGraph};
pub use geometry::{distance, is_collinear, points_collinear, Position, DEFAULT_COLLINEAR_TOL};
pub use network::{build_network, NetworkDocument, NetworkGraph, NodeSpec, Region};
pub use topology::Graph;

/// Identifier of a sensor node, dense in `0..S` within one network.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(value: usize) -> Self {
        NodeId(value)
    }
}
