//! Localizability detection protocols run by every node of the simulator.

mod ite;
mod te;
mod tp;
mod we;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ite::{IteCandidate, IteMessage, IteNode, ITE_NODE_LIMIT};
pub use te::{BranchTuple, ParentCandidate, TeMessage, TeNode};
pub use tp::{TpMessage, TpNode};
pub use we::{find_wheel, WeMessage, WeNode, WHEEL_SEARCH_BUDGET};

use crate::error::{Error, Result};
use crate::graph::{points_collinear, NetworkGraph, NodeId, Position, DEFAULT_COLLINEAR_TOL};
use crate::sim::{run_nodes, RunOptions, RunTrace};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Directed triangle extension with dual-v detection.
    Te,
    /// Undirected triangle extension keeping every branch.
    Ite,
    /// Trilateration.
    Tp,
    /// Wheel extension.
    We,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::Te, Protocol::Ite, Protocol::Tp, Protocol::We];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Te => "te",
            Protocol::Ite => "ite",
            Protocol::Tp => "tp",
            Protocol::We => "we",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "te" => Ok(Protocol::Te),
            "ite" => Ok(Protocol::Ite),
            "tp" => Ok(Protocol::Tp),
            "we" => Ok(Protocol::We),
            _ => Err(Error::UnknownProtocol(s.to_string())),
        }
    }
}

/// Runs `protocol` on every node of `net`.
pub fn run<T: Scalar>(
    net: &NetworkGraph<T>,
    protocol: Protocol,
    options: &RunOptions<T>,
) -> Result<RunTrace> {
    let n = net.node_count();
    let trace = match protocol {
        Protocol::Te => {
            let mut nodes: Vec<TeNode<T>> = net.ids().map(TeNode::new).collect();
            run_nodes(net, &mut nodes, options, protocol.name())
        }
        Protocol::Ite => {
            if n > ITE_NODE_LIMIT {
                return Err(Error::NetworkTooLarge {
                    protocol: "ite",
                    limit: ITE_NODE_LIMIT,
                    got: n,
                });
            }
            let mut nodes: Vec<IteNode<T>> = net.ids().map(IteNode::new).collect();
            run_nodes(net, &mut nodes, options, protocol.name())
        }
        Protocol::Tp => {
            let mut nodes: Vec<TpNode<T>> = net.ids().map(TpNode::new).collect();
            run_nodes(net, &mut nodes, options, protocol.name())
        }
        Protocol::We => {
            let mut nodes: Vec<WeNode<T>> = net.ids().map(WeNode::new).collect();
            run_nodes(net, &mut nodes, options, protocol.name())
        }
    };
    Ok(trace)
}

/// Runs with the default budget of ten rounds per node.
pub fn run_default<T: Scalar>(net: &NetworkGraph<T>, protocol: Protocol) -> Result<RunTrace> {
    run(net, protocol, &RunOptions::for_size(net.node_count()))
}

pub(crate) fn sorted_pair(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

pub(crate) fn non_collinear<T: Scalar>(points: &[Position<T>]) -> bool {
    !points_collinear(points, T::of(DEFAULT_COLLINEAR_TOL))
}
