use serde::{Deserialize, Serialize};

use super::connectivity::{vertex_connectivity, vertex_connectivity_at_least};
use super::pebble::{pebble_game_rigid, PebbleResult};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCountClass {
    Under,
    /// `|E| = 2|V| - 3`
    Minimal,
    /// `|E| = 2|V| - 2`
    Circuit,
    Over,
}

impl EdgeCountClass {
    pub fn of(vertices: usize, edges: usize) -> Self {
        let minimal = (2 * vertices).saturating_sub(3);
        match edges {
            e if e < minimal => Self::Under,
            e if e == minimal => Self::Minimal,
            e if e == minimal + 1 => Self::Circuit,
            _ => Self::Over,
        }
    }
}

/// Summary of the combinatorial rigidity properties of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityVerdict {
    /// Every proper vertex subset of size at least two satisfies the count.
    pub sparsity_ok: bool,
    pub edge_count_class: EdgeCountClass,
    pub rigid: bool,
    pub redundantly_rigid: bool,
    pub connectivity: usize,
    pub globally_rigid: bool,
    pub minimally_rigid: bool,
    pub m_circuit: bool,
}

impl RigidityVerdict {
    pub fn of(g: &impl AsRef<Graph>) -> Self {
        let g = g.as_ref();
        let n = g.vertex_count();
        let sparsity_ok = proper_subsets_sparse(g);
        let class = EdgeCountClass::of(n, g.edge_count());
        let (rigid, redundantly_rigid) = pebble_game_rigid(g);
        let minimally_rigid = n >= 2 && class == EdgeCountClass::Minimal && sparsity_ok;
        let m_circuit = n >= 4 && class == EdgeCountClass::Circuit && sparsity_ok;
        Self {
            sparsity_ok,
            edge_count_class: class,
            rigid,
            redundantly_rigid,
            connectivity: vertex_connectivity(g),
            globally_rigid: is_globally_rigid(g),
            minimally_rigid,
            m_circuit,
        }
    }
}

/// `|E[X]| <= 2|X| - 3` for all `X` with `2 <= |X| <= |V| - 1`, decided by
/// checking that every vertex-deleted subgraph is independent.
pub fn proper_subsets_sparse(g: &impl AsRef<Graph>) -> bool {
    let g = g.as_ref();
    let n = g.vertex_count();
    if PebbleResult::run(g).rank == g.edge_count() {
        return true;
    }
    (0..n).all(|v| {
        let rest: Vec<usize> = (0..n).filter(|&x| x != v).collect();
        let h = g.induced(&rest);
        PebbleResult::run(&h).rank == h.edge_count()
    })
}

pub fn is_minimally_rigid(g: &impl AsRef<Graph>) -> bool {
    let g = g.as_ref();
    let n = g.vertex_count();
    n >= 2 && g.edge_count() == 2 * n - 3 && PebbleResult::run(g).rank == g.edge_count()
}

pub fn is_m_circuit(g: &impl AsRef<Graph>) -> bool {
    let g = g.as_ref();
    let n = g.vertex_count();
    n >= 4 && g.edge_count() == 2 * n - 2 && proper_subsets_sparse(g)
}

/// 3-connected and redundantly rigid; complete graphs on two or three
/// vertices count as globally rigid.
pub fn is_globally_rigid(g: &impl AsRef<Graph>) -> bool {
    let g = g.as_ref();
    let n = g.vertex_count();
    if n <= 3 {
        return g.edge_count() == n * n.saturating_sub(1) / 2;
    }
    vertex_connectivity_at_least(g, 3).unwrap_or(false) && pebble_game_rigid(g).1
}
