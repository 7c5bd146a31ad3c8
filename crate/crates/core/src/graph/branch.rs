use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ConstraintGraph, Graph, NodeId};
use crate::error::{Error, Result};
use crate::Scalar;

/// A triangle-extension sequence grown from the edge between two roots.
///
/// Every member is attached to two earlier vertices; the last member is the
/// leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    roots: (NodeId, NodeId),
    members: Vec<(NodeId, (NodeId, NodeId))>,
    levels: BTreeMap<NodeId, usize>,
}

impl Branch {
    pub fn from_roots(r1: NodeId, r2: NodeId) -> Result<Self> {
        if r1 == r2 {
            return Err(Error::EqualParents);
        }
        Ok(Self {
            roots: (r1, r2),
            members: Vec::new(),
            levels: BTreeMap::from([(r1, 0), (r2, 0)]),
        })
    }

    pub fn roots(&self) -> (NodeId, NodeId) {
        self.roots
    }

    pub fn members(&self) -> &[(NodeId, (NodeId, NodeId))] {
        &self.members
    }

    pub fn leaf(&self) -> Result<NodeId> {
        self.members.last().map(|m| m.0).ok_or(Error::EmptyBranch)
    }

    pub fn level(&self, v: NodeId) -> Option<usize> {
        self.levels.get(&v).copied()
    }

    pub fn levels(&self) -> &BTreeMap<NodeId, usize> {
        &self.levels
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.levels.contains_key(&v)
    }

    /// Roots followed by members in extension order.
    pub fn vertices(&self) -> Vec<NodeId> {
        let mut out = vec![self.roots.0, self.roots.1];
        out.extend(self.members.iter().map(|m| m.0));
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len() + 2
    }

    pub fn edge_count(&self) -> usize {
        1 + 2 * self.members.len()
    }

    pub fn parents(&self, v: NodeId) -> Option<(NodeId, NodeId)> {
        self.members.iter().find(|m| m.0 == v).map(|m| m.1)
    }

    pub fn extend(&self, v: NodeId, r1: NodeId, r2: NodeId) -> Result<Self> {
        let mut next = self.clone();
        next.extend_in_place(v, r1, r2)?;
        Ok(next)
    }

    pub fn extend_in_place(&mut self, v: NodeId, r1: NodeId, r2: NodeId) -> Result<()> {
        if self.contains(v) {
            return Err(Error::AlreadyPresent(v));
        }
        if r1 == r2 {
            return Err(Error::EqualParents);
        }
        let l1 = self.level(r1).ok_or(Error::MissingParent(r1))?;
        let l2 = self.level(r2).ok_or(Error::MissingParent(r2))?;
        self.members.push((v, (r1, r2)));
        self.levels.insert(v, 1 + l1.max(l2));
        Ok(())
    }

    /// Drops the leaf. `None` when only the roots remain.
    pub fn without_leaf(&self) -> Option<Self> {
        let mut next = self.clone();
        let (v, _) = next.members.pop()?;
        next.levels.remove(&v);
        Some(next)
    }

    /// The branch of `v`: `v`, all of its ancestors and their edges.
    pub fn ancestral(&self, v: NodeId) -> Result<Self> {
        if !self.contains(v) {
            return Err(Error::MissingParent(v));
        }
        let mut keep = BTreeSet::from([v]);
        for &(m, (a, b)) in self.members.iter().rev() {
            if keep.contains(&m) {
                keep.insert(a);
                keep.insert(b);
            }
        }
        let mut out = Self::from_roots(self.roots.0, self.roots.1)?;
        for &(m, (a, b)) in &self.members {
            if keep.contains(&m) {
                out.extend_in_place(m, a, b)?;
            }
        }
        Ok(out)
    }

    /// True when every vertex other than the leaf is an ancestor of the leaf.
    pub fn is_branch(&self) -> bool {
        match self.leaf() {
            Ok(leaf) => self.ancestral(leaf).map(|b| b == *self).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// Underlying graph on `0..vertex_count()`, indexed like [`Branch::vertices`].
    pub fn to_graph(&self) -> (Graph, Vec<NodeId>) {
        let order = self.vertices();
        let index: BTreeMap<NodeId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(order.len());
        g.add_edge(0, 1);
        for &(m, (a, b)) in &self.members {
            g.add_edge(index[&m], index[&a]);
            g.add_edge(index[&m], index[&b]);
        }
        (g, order)
    }

    /// Adds the closer `q` with edges to the leaf and both roots. `q` becomes
    /// the last vertex of the returned graph.
    pub fn attach_closer<T: Scalar>(&self, q: NodeId) -> Result<ConstraintGraph<T>> {
        if self.contains(q) {
            return Err(Error::AlreadyPresent(q));
        }
        let leaf = self.leaf()?;
        let (mut g, order) = self.to_graph();
        let leaf_index = order.iter().position(|&v| v == leaf).expect("leaf is a vertex");
        let qi = g.add_vertex();
        g.add_edge(qi, leaf_index);
        g.add_edge(qi, 0);
        g.add_edge(qi, 1);
        Ok(ConstraintGraph::from_graph(g))
    }

    /// Random extension sequence of `steps` members on ids `0..steps+2`,
    /// roots `0` and `1`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, steps: usize) -> Self {
        let mut b = Self::from_roots(NodeId(0), NodeId(1)).expect("distinct roots");
        for v in 2..steps + 2 {
            let picks: Vec<usize> = (0..v).collect::<Vec<_>>().choose_multiple(rng, 2).copied().collect();
            b.extend_in_place(NodeId(v), NodeId(picks[0]), NodeId(picks[1]))
                .expect("fresh vertex with existing parents");
        }
        b
    }

    /// Random true branch (every member is an ancestor of the leaf) with
    /// at least one member.
    pub fn random_branch<R: Rng + ?Sized>(rng: &mut R, max_steps: usize) -> Self {
        let steps = rng.gen_range(1..=max_steps.max(1));
        let block = Self::random(rng, steps);
        let leaf = block.leaf().expect("at least one member");
        block.ancestral(leaf).expect("leaf is a member")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn id(i: usize) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn first_extension_is_a_triangle() {
        let b = Branch::from_roots(id(0), id(1)).unwrap();
        let t = b.extend(id(2), id(0), id(1)).unwrap();
        assert_eq!(t.level(id(0)), Some(0));
        assert_eq!(t.level(id(1)), Some(0));
        assert_eq!(t.level(id(2)), Some(1));
        assert_eq!(t.to_graph().0, Graph::complete(3));
    }

    #[test]
    fn five_extensions_give_eleven_edges() {
        let mut b = Branch::from_roots(id(0), id(1)).unwrap();
        for (v, a, c) in [(2, 0, 1), (3, 2, 1), (4, 3, 2), (5, 4, 3), (6, 5, 4)] {
            b.extend_in_place(id(v), id(a), id(c)).unwrap();
        }
        let (g, _) = b.to_graph();
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edge_count(), 11);
        assert_eq!(b.level(id(6)), Some(5));
    }

    #[test]
    fn extension_errors() {
        let b = Branch::from_roots(id(0), id(1))
            .unwrap()
            .extend(id(2), id(0), id(1))
            .unwrap();
        assert!(matches!(b.extend(id(2), id(0), id(1)), Err(Error::AlreadyPresent(_))));
        assert!(matches!(b.extend(id(3), id(0), id(9)), Err(Error::MissingParent(_))));
        assert!(matches!(b.extend(id(3), id(0), id(0)), Err(Error::EqualParents)));
        assert!(matches!(
            Branch::from_roots(id(0), id(1)).unwrap().leaf(),
            Err(Error::EmptyBranch)
        ));
    }

    #[test]
    fn ancestral_drops_unrelated_members() {
        let mut b = Branch::from_roots(id(0), id(1)).unwrap();
        b.extend_in_place(id(2), id(0), id(1)).unwrap();
        b.extend_in_place(id(3), id(2), id(1)).unwrap();
        b.extend_in_place(id(4), id(2), id(0)).unwrap();
        assert!(!b.is_branch());
        let b3 = b.ancestral(id(3)).unwrap();
        assert_eq!(b3.vertices(), vec![id(0), id(1), id(2), id(3)]);
        assert!(b3.is_branch());
    }

    #[test]
    fn closer_on_triangle_is_k4() {
        let t = Branch::from_roots(id(0), id(1))
            .unwrap()
            .extend(id(2), id(0), id(1))
            .unwrap();
        let g = t.attach_closer::<f64>(id(3)).unwrap();
        assert_eq!(g.graph().edge_count(), 6);
        assert!(matches!(t.attach_closer::<f64>(id(2)), Err(Error::AlreadyPresent(_))));
    }

    #[test]
    fn random_branches_are_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let b = Branch::random_branch(&mut rng, 8);
            assert!(b.is_branch());
            assert_eq!(b.to_graph().0.edge_count(), 2 * b.vertex_count() - 3);
        }
    }
}
