//! Centralized reference for which nodes are localizable: a node qualifies
//! if it lies in a redundantly rigid component of the constraint graph and
//! reaches three distinct beacons by vertex-disjoint paths inside it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::flow::disjoint_paths_to_targets;
use crate::graph::{points_collinear, to_constraint_graph, Graph, NetworkGraph, NodeId, DEFAULT_COLLINEAR_TOL};
use crate::rigidity::PebbleResult;
use crate::Scalar;

/// Largest network the oracle accepts.
pub const ORACLE_NODE_LIMIT: usize = 400;

/// Vertex sets of the redundantly rigid components, each sorted. A vertex
/// may appear in several.
pub fn redundantly_rigid_components(g: &impl AsRef<Graph>) -> Vec<Vec<usize>> {
    let g = g.as_ref();
    let coloops = PebbleResult::run(g).coloops(g);
    let kept: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .zip(&coloops)
        .filter(|(_, &c)| !c)
        .map(|(&e, _)| e)
        .collect();
    let h = Graph::from_edges(g.vertex_count(), kept).expect("edges come from a valid graph");
    PebbleResult::run(&h).rigid_components(&h)
}

/// Three paths from `node` to distinct beacons sharing only `node`, using
/// only vertices with `allowed[v]` (all vertices if `None`).
pub fn three_disjoint_paths_to_beacons(
    g: &impl AsRef<Graph>,
    node: usize,
    beacons: &[usize],
    allowed: Option<&[bool]>,
) -> Result<Option<Vec<Vec<usize>>>> {
    let usable: Vec<usize> = beacons
        .iter()
        .copied()
        .filter(|&b| b != node && allowed.is_none_or(|a| a[b]))
        .collect();
    if beacons.len() < 3 {
        return Err(Error::TooFewBeacons {
            needed: 3,
            got: beacons.len(),
        });
    }
    if usable.len() < 3 {
        return Ok(None);
    }
    let paths = disjoint_paths_to_targets(g.as_ref(), node, &usable, allowed, 3);
    Ok((paths.len() == 3).then_some(paths))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Index into `LocalizabilitySet::components`.
    pub component: usize,
    pub beacons: [NodeId; 3],
    pub paths: Vec<Vec<NodeId>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LocalizabilitySet {
    pub localizable: BTreeSet<NodeId>,
    pub witnesses: BTreeMap<NodeId, Witness>,
    pub components: Vec<Vec<NodeId>>,
    /// Fewer than three beacons, or all beacons on one line. Only the
    /// beacons are reported then.
    pub degenerate: bool,
}

impl LocalizabilitySet {
    pub fn contains(&self, v: NodeId) -> bool {
        self.localizable.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.localizable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.localizable.is_empty()
    }

    /// Nodes of `claimed` the oracle does not back.
    pub fn violations<'a>(&self, claimed: impl IntoIterator<Item = &'a NodeId>) -> Vec<NodeId> {
        claimed.into_iter().copied().filter(|v| !self.contains(*v)).collect()
    }
}

/// Every node meeting both conditions on the constraint graph of `net`,
/// plus all beacons.
pub fn rr3p_localizable_set<T: Scalar>(net: &NetworkGraph<T>) -> Result<LocalizabilitySet> {
    let n = net.node_count();
    if n > ORACLE_NODE_LIMIT {
        return Err(Error::NetworkTooLarge {
            protocol: "oracle",
            limit: ORACLE_NODE_LIMIT,
            got: n,
        });
    }
    let beacons = net.beacons();
    let mut out = LocalizabilitySet {
        localizable: beacons.iter().copied().collect(),
        ..Default::default()
    };
    let beacon_pos: Vec<_> = beacons.iter().map(|&b| net.position(b)).collect();
    if beacons.len() < 3 || points_collinear(&beacon_pos, T::of(DEFAULT_COLLINEAR_TOL)) {
        out.degenerate = true;
        return Ok(out);
    }
    let cg = to_constraint_graph(net);
    let g = cg.graph();
    let comps = redundantly_rigid_components(g);
    let beacon_idx: Vec<usize> = beacons.iter().map(|b| b.index()).collect();
    let mut allowed = vec![false; n];
    for (ci, comp) in comps.iter().enumerate() {
        let inside: Vec<usize> = beacon_idx.iter().copied().filter(|b| comp.binary_search(b).is_ok()).collect();
        if inside.len() < 3 {
            continue;
        }
        allowed.iter_mut().for_each(|a| *a = false);
        for &v in comp {
            allowed[v] = true;
        }
        for &v in comp {
            let id = NodeId(v);
            if out.localizable.contains(&id) {
                continue;
            }
            if let Some(paths) = three_disjoint_paths_to_beacons(g, v, &inside, Some(&allowed))? {
                let ends: Vec<NodeId> = paths.iter().map(|p| NodeId(*p.last().unwrap())).collect();
                out.localizable.insert(id);
                out.witnesses.insert(
                    id,
                    Witness {
                        component: ci,
                        beacons: [ends[0], ends[1], ends[2]],
                        paths: paths.into_iter().map(|p| p.into_iter().map(NodeId).collect()).collect(),
                    },
                );
            }
        }
    }
    out.components = comps.into_iter().map(|c| c.into_iter().map(NodeId).collect()).collect();
    Ok(out)
}
