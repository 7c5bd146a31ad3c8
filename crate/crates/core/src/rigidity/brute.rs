//! Exponential subset-enumeration checks, used as a reference for the
//! pebble game on small graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Largest vertex count accepted by the enumerators.
pub const ENUMERATION_LIMIT: usize = 16;

/// A vertex subset together with the number of edges it induces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetWitness {
    pub vertex_set: Vec<NodeId>,
    pub edge_count: usize,
}

fn guard(g: &Graph) -> Result<()> {
    if g.vertex_count() > ENUMERATION_LIMIT {
        return Err(Error::TooLargeForEnumeration(g.vertex_count(), ENUMERATION_LIMIT));
    }
    Ok(())
}

fn neighbor_masks(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    let mut masks = vec![0u32; n];
    for &(u, v) in edges {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

fn induced(masks: &[u32], set: u32) -> usize {
    let mut total = 0;
    let mut rest = set;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += (masks[x] & set).count_ones() as usize;
    }
    total / 2
}

fn to_ids(set: u32) -> Vec<NodeId> {
    (0..32).filter(|i| set >> i & 1 == 1).map(NodeId).collect()
}

/// Checks `|E[X]| <= 2|X| - 3` for every `X` with `2 <= |X| <= |V| - 1`.
/// On failure the witness is a smallest violating subset.
pub fn laman_sparse_bruteforce(g: &impl AsRef<Graph>) -> Result<(bool, Option<SubsetWitness>)> {
    let g = g.as_ref();
    guard(g)?;
    let n = g.vertex_count();
    let masks = neighbor_masks(n, g.edges());
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut best: Option<(u32, usize)> = None;
    for set in 1..full {
        let size = set.count_ones() as usize;
        if size < 2 {
            continue;
        }
        if let Some((b, _)) = best {
            if b.count_ones() as usize <= size {
                continue;
            }
        }
        let e = induced(&masks, set);
        if e > 2 * size - 3 {
            best = Some((set, e));
        }
    }
    Ok(match best {
        None => (true, None),
        Some((set, edge_count)) => (
            false,
            Some(SubsetWitness {
                vertex_set: to_ids(set),
                edge_count,
            }),
        ),
    })
}

/// Rank of the rigidity matroid by greedy insertion, where each insertion
/// is checked against the count on every vertex superset of the new edge.
pub fn bruteforce_rank(g: &impl AsRef<Graph>) -> Result<usize> {
    let g = g.as_ref();
    guard(g)?;
    let n = g.vertex_count();
    let mut masks = vec![0u32; n];
    let mut rank = 0;
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    for &(u, v) in g.edges() {
        let pair = (1u32 << u) | (1u32 << v);
        let rest = full & !pair;
        let mut ok = true;
        // Walk every submask of `rest`.
        let mut sub = rest;
        loop {
            let set = sub | pair;
            let size = set.count_ones() as usize;
            if induced(&masks, set) + 1 > 2 * size - 3 {
                ok = false;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        if ok {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
            rank += 1;
        }
    }
    Ok(rank)
}

pub fn bruteforce_rigid(g: &impl AsRef<Graph>) -> Result<bool> {
    let g = g.as_ref();
    let n = g.vertex_count();
    Ok(n <= 1 || bruteforce_rank(g)? == 2 * n - 3)
}

/// Rigid after deleting any single edge.
pub fn bruteforce_redundantly_rigid(g: &impl AsRef<Graph>) -> Result<bool> {
    let g = g.as_ref();
    if !bruteforce_rigid(g)? {
        return Ok(false);
    }
    for i in 0..g.edge_count() {
        if !bruteforce_rigid(&g.without_edge(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn bruteforce_minimally_rigid(g: &impl AsRef<Graph>) -> Result<bool> {
    let g = g.as_ref();
    let n = g.vertex_count();
    Ok(n >= 2 && g.edge_count() == 2 * n - 3 && laman_sparse_bruteforce(g)?.0)
}

pub fn bruteforce_m_circuit(g: &impl AsRef<Graph>) -> Result<bool> {
    let g = g.as_ref();
    let n = g.vertex_count();
    Ok(n >= 4 && g.edge_count() == 2 * n - 2 && laman_sparse_bruteforce(g)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_k4_are_sparse() {
        assert_eq!(laman_sparse_bruteforce(&Graph::complete(3)).unwrap(), (true, None));
        assert_eq!(laman_sparse_bruteforce(&Graph::complete(4)).unwrap(), (true, None));
    }

    #[test]
    fn k4_plus_degree_four_vertex_fails() {
        // K4 on 0..4 plus vertex 4 joined to all of them: K5.
        let g = Graph::complete(5);
        let (ok, witness) = laman_sparse_bruteforce(&g).unwrap();
        assert!(!ok);
        let w = witness.unwrap();
        // Smallest violator is a K4: 6 edges on 4 vertices, bound 5.
        assert_eq!(w.vertex_set.len(), 4);
        assert_eq!(w.edge_count, 6);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            laman_sparse_bruteforce(&Graph::path(17)),
            Err(Error::TooLargeForEnumeration(17, 16))
        ));
    }

    #[test]
    fn rank_of_named_graphs() {
        assert_eq!(bruteforce_rank(&Graph::complete(4)).unwrap(), 5);
        assert_eq!(bruteforce_rank(&Graph::complete(6)).unwrap(), 9);
        assert_eq!(bruteforce_rank(&Graph::cycle(5)).unwrap(), 5);
        assert!(!bruteforce_rigid(&Graph::cycle(5)).unwrap());
        assert!(bruteforce_rigid(&Graph::wheel(6)).unwrap());
    }

    #[test]
    fn minimal_and_circuit_classes() {
        assert!(bruteforce_minimally_rigid(&Graph::complete(2)).unwrap());
        assert!(bruteforce_minimally_rigid(&Graph::complete(3)).unwrap());
        assert!(!bruteforce_minimally_rigid(&Graph::complete(4)).unwrap());
        assert!(bruteforce_m_circuit(&Graph::complete(4)).unwrap());
        assert!(!bruteforce_m_circuit(&Graph::complete(3)).unwrap());
        assert!(bruteforce_m_circuit(&Graph::wheel(6)).unwrap());
        assert!(bruteforce_redundantly_rigid(&Graph::complete(4)).unwrap());
        assert!(!bruteforce_redundantly_rigid(&Graph::complete(3)).unwrap());
    }
}
