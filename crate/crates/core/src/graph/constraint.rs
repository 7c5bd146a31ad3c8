use super::{Graph, NetworkGraph, NodeId};
use crate::Scalar;

/// Distance constraints known to the network: radio links plus every
/// beacon-beacon pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintGraph<T = f64> {
    graph: Graph,
    lengths: Vec<T>,
}

impl<T> AsRef<Graph> for ConstraintGraph<T> {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

impl<T: Scalar> ConstraintGraph<T> {
    /// Pure combinatorial constraint graph with unit lengths.
    pub fn from_graph(graph: Graph) -> Self {
        let lengths = vec![T::one(); graph.edge_count()];
        Self { graph, lengths }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edges with their lengths, in the graph's edge order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, T)> + '_ {
        self.graph
            .edges()
            .iter()
            .zip(&self.lengths)
            .map(|(&(u, v), &l)| (NodeId(u), NodeId(v), l))
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.graph.has_edge(a.index(), b.index())
    }
}

pub fn to_constraint_graph<T: Scalar>(net: &NetworkGraph<T>) -> ConstraintGraph<T> {
    let mut graph = net.radio().clone();
    let beacons = net.beacons();
    for (i, &a) in beacons.iter().enumerate() {
        for &b in &beacons[i + 1..] {
            graph.add_edge(a.index(), b.index());
        }
    }
    let lengths = graph
        .edges()
        .iter()
        .map(|&(u, v)| net.distance(NodeId(u), NodeId(v)))
        .collect();
    ConstraintGraph { graph, lengths }
}
