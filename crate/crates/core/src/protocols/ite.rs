use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::te::BranchTuple;
use super::{non_collinear, sorted_pair};
use crate::graph::{NodeId, Position};
use crate::sim::{LocState, Message, MessageKind, NodeCtx, NodeProtocol, Outbox};
use crate::Scalar;

/// Networks larger than this are refused: every node keeps every branch.
pub const ITE_NODE_LIMIT: usize = 100;

type Pair = (NodeId, NodeId);
type HeardKey = (NodeId, Option<Pair>, Option<Pair>);

/// One branch of the sender, with every vertex it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IteCandidate<T = f64> {
    pub id: NodeId,
    pub beacon: bool,
    pub b: BranchTuple,
    pub ancestors: BTreeSet<NodeId>,
    /// Known once the sender is localizable.
    pub position: Option<Position<T>>,
}

impl<T> IteCandidate<T> {
    fn key(&self) -> HeardKey {
        (self.id, self.b.parents, self.b.roots)
    }

    /// True if `v` is part of the branch this candidate describes, other
    /// than as its leaf.
    fn depends_on(&self, v: NodeId) -> bool {
        self.ancestors.contains(&v) || self.b.has_parent(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum IteMessage<T = f64> {
    Candidate(IteCandidate<T>),
}

#[derive(Clone, Debug)]
struct IteBranch {
    state: LocState,
    ancestors: BTreeSet<NodeId>,
}

/// Undirected triangle extension: every valid branch is kept.
#[derive(Clone, Debug)]
pub struct IteNode<T = f64> {
    id: NodeId,
    beacon: bool,
    position: Option<Position<T>>,
    branches: BTreeMap<(Pair, Pair), IteBranch>,
    heard: BTreeMap<HeardKey, IteCandidate<T>>,
    by_roots: BTreeMap<Pair, BTreeMap<NodeId, Vec<HeardKey>>>,
    beacons: BTreeSet<NodeId>,
    /// Localized neighbours and their positions.
    anchors: BTreeMap<NodeId, Position<T>>,
    fresh: Vec<(Pair, Pair)>,
}

impl<T: Scalar> IteNode<T> {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            beacon: false,
            position: None,
            branches: BTreeMap::new(),
            heard: BTreeMap::new(),
            by_roots: BTreeMap::new(),
            beacons: BTreeSet::new(),
            anchors: BTreeMap::new(),
            fresh: Vec::new(),
        }
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> impl Iterator<Item = BranchTuple> + '_ {
        self.branches.iter().map(|(&(parents, roots), b)| BranchTuple {
            state: b.state,
            parents: Some(parents),
            roots: Some(roots),
        })
    }

    fn candidate(&self, key: (Pair, Pair)) -> IteCandidate<T> {
        let b = &self.branches[&key];
        IteCandidate {
            id: self.id,
            beacon: false,
            b: BranchTuple {
                state: b.state,
                parents: Some(key.0),
                roots: Some(key.1),
            },
            ancestors: b.ancestors.clone(),
            position: self.position,
        }
    }

    fn announce(&self, key: (Pair, Pair), out: &mut Outbox<IteMessage<T>>) {
        out.broadcast(MessageKind::State, IteMessage::Candidate(self.candidate(key)));
    }

    fn remember(&mut self, p: &IteCandidate<T>) {
        let key = p.key();
        if p.beacon {
            self.beacons.insert(p.id);
        }
        if self.heard.insert(key, p.clone()).is_none() {
            if let Some(r) = p.b.roots {
                self.by_roots.entry(r).or_default().entry(p.id).or_default().push(key);
            }
        }
    }

    /// Senders `j` that may pair with the incoming `pi`, with the roots of
    /// the resulting branch and the roots under which `j` is indexed (`None`
    /// for beacons and localized roots, looked up by sender).
    fn partners(&self, pi: &IteCandidate<T>) -> Vec<(NodeId, Pair, Option<Pair>)> {
        let mut out = Vec::new();
        if pi.beacon {
            out.extend(self.beacons.iter().map(|&j| (j, sorted_pair(pi.id, j), None)));
            for (&r, senders) in &self.by_roots {
                if r.0 == pi.id || r.1 == pi.id {
                    out.extend(senders.keys().map(|&j| (j, r, Some(r))));
                }
            }
            return out;
        }
        let Some(roots) = pi.b.roots else { return out };
        for root in [roots.0, roots.1] {
            out.push((root, roots, None));
        }
        if let Some(senders) = self.by_roots.get(&roots) {
            out.extend(senders.keys().map(|&j| (j, roots, Some(roots))));
        }
        out
    }

    /// First candidate of `j` usable as a parent, taken from the roots index
    /// or, for `None`, any localizable candidate of `j`.
    fn usable(&self, j: NodeId, index: Option<Pair>) -> Option<&IteCandidate<T>> {
        let ok = |pj: &&IteCandidate<T>| !pj.depends_on(self.id);
        match index {
            Some(r) => self.by_roots.get(&r)?.get(&j)?.iter().map(|k| &self.heard[k]).find(ok),
            None => {
                let lo = (j, None, None);
                let hi = (NodeId(j.0 + 1), None, None);
                self.heard
                    .range(lo..hi)
                    .map(|(_, pj)| pj)
                    .filter(|pj| pj.b.state == LocState::Localizable)
                    .find(ok)
            }
        }
    }

    fn extend(&mut self, pi: &IteCandidate<T>, out: &mut Outbox<IteMessage<T>>) {
        if pi.depends_on(self.id) {
            return;
        }
        for (j, roots, index) in self.partners(pi) {
            if j == pi.id {
                continue;
            }
            let key = (sorted_pair(pi.id, j), roots);
            if self.branches.contains_key(&key) {
                continue;
            }
            let Some(pj) = self.usable(j, index) else { continue };
            let mut ancestors: BTreeSet<NodeId> = pi.ancestors.union(&pj.ancestors).copied().collect();
            ancestors.extend([pi.id, pj.id, roots.0, roots.1]);
            self.branches.insert(
                key,
                IteBranch {
                    state: LocState::Rigid,
                    ancestors,
                },
            );
            self.fresh.push(key);
            self.announce(key, out);
        }
    }

    /// An extra localized neighbour outside the branch closes it.
    fn closed_by(&self, ctx: &NodeCtx<'_, T>, q: NodeId, at: Position<T>, key: (Pair, Pair), b: &IteBranch) -> bool {
        let roots = key.1;
        if b.ancestors.contains(&q) {
            return false;
        }
        match (ctx.beacon_position(roots.0), ctx.beacon_position(roots.1)) {
            (Some(a), Some(c)) => non_collinear(&[a, c, at]),
            _ => false,
        }
    }

    fn mark(&mut self, ctx: &NodeCtx<'_, T>, marked: Vec<(Pair, Pair)>, out: &mut Outbox<IteMessage<T>>) {
        if marked.is_empty() {
            return;
        }
        if self.position.is_none() {
            self.position = Some(ctx.resolved_position());
        }
        for key in marked {
            self.branches.get_mut(&key).unwrap().state = LocState::Localizable;
            self.announce(key, out);
        }
    }

    fn detect(&mut self, ctx: &NodeCtx<'_, T>, pn: &IteCandidate<T>, out: &mut Outbox<IteMessage<T>>) {
        if pn.b.state != LocState::Localizable {
            return;
        }
        let anchor = match pn.position {
            Some(at) if !self.anchors.contains_key(&pn.id) => {
                self.anchors.insert(pn.id, at);
                Some(at)
            }
            _ => None,
        };
        let child_roots = pn.b.roots.filter(|_| pn.b.has_parent(self.id));
        if anchor.is_none() && child_roots.is_none() {
            return;
        }
        let marked = self
            .branches
            .iter()
            .filter(|(&key, b)| {
                b.state != LocState::Localizable
                    && (child_roots == Some(key.1) || anchor.is_some_and(|at| self.closed_by(ctx, pn.id, at, key, b)))
            })
            .map(|(&key, _)| key)
            .collect();
        self.mark(ctx, marked, out);
    }

    /// Checks new branches against everything localized heard so far.
    fn rescan(&mut self, ctx: &NodeCtx<'_, T>, fresh: Vec<(Pair, Pair)>, out: &mut Outbox<IteMessage<T>>) {
        let child_roots: BTreeSet<Pair> = self
            .heard
            .values()
            .filter(|p| p.b.state == LocState::Localizable && p.b.has_parent(self.id))
            .filter_map(|p| p.b.roots)
            .collect();
        let marked = fresh
            .into_iter()
            .filter(|key| {
                let b = &self.branches[key];
                b.state != LocState::Localizable
                    && (child_roots.contains(&key.1)
                        || self.anchors.iter().any(|(&q, &at)| self.closed_by(ctx, q, at, *key, b)))
            })
            .collect();
        self.mark(ctx, marked, out);
    }
}

impl<T: Scalar> NodeProtocol<T> for IteNode<T> {
    type Payload = IteMessage<T>;

    fn init(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<IteMessage<T>>) {
        if ctx.is_beacon() {
            self.beacon = true;
            self.position = Some(ctx.resolved_position());
            out.broadcast(
                MessageKind::State,
                IteMessage::Candidate(IteCandidate {
                    id: self.id,
                    beacon: true,
                    b: BranchTuple {
                        state: LocState::Localizable,
                        parents: None,
                        roots: None,
                    },
                    ancestors: BTreeSet::new(),
                    position: self.position,
                }),
            );
        }
    }

    fn on_round(&mut self, ctx: &NodeCtx<'_, T>, inbox: &[Message<IteMessage<T>>], out: &mut Outbox<IteMessage<T>>) {
        if self.beacon {
            return;
        }
        // Branches created last round are checked against everything heard.
        let fresh = std::mem::take(&mut self.fresh);
        if !fresh.is_empty() {
            self.rescan(ctx, fresh, out);
        }
        for m in inbox {
            let IteMessage::Candidate(p) = &m.payload;
            self.remember(p);
            self.extend(p, out);
            self.detect(ctx, p, out);
        }
    }

    fn state(&self) -> LocState {
        if self.beacon {
            return LocState::Localizable;
        }
        self.branches
            .values()
            .map(|b| b.state)
            .max()
            .unwrap_or(LocState::Flexible)
    }
}
