use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{non_collinear, sorted_pair};
use crate::graph::{NodeId, Position};
use crate::sim::{LocState, Message, MessageKind, NodeCtx, NodeProtocol, Outbox};
use crate::Scalar;

/// The `b` record: a node's state with its parents and roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchTuple {
    pub state: LocState,
    pub parents: Option<(NodeId, NodeId)>,
    pub roots: Option<(NodeId, NodeId)>,
}

impl BranchTuple {
    pub fn flexible() -> Self {
        Self {
            state: LocState::Flexible,
            parents: None,
            roots: None,
        }
    }

    pub fn has_parent(&self, v: NodeId) -> bool {
        self.parents.is_some_and(|(a, b)| a == v || b == v)
    }

    pub fn has_root(&self, v: NodeId) -> bool {
        self.roots.is_some_and(|(a, b)| a == v || b == v)
    }
}

/// The `p` record broadcast by TE nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParentCandidate<T = f64> {
    pub id: NodeId,
    pub beacon: bool,
    pub b: BranchTuple,
    /// Known once the sender is localizable.
    pub position: Option<Position<T>>,
    /// Positions of `b.roots`, in the same order.
    pub root_positions: Option<[Position<T>; 2]>,
    /// Set by a node that resolved a Dual-V-Topo: the two nodes of the other
    /// block it bridged to.
    pub bridge: Option<(NodeId, NodeId)>,
}

impl<T: Scalar> ParentCandidate<T> {
    /// Position of a sender that can serve as a root or closer: a beacon or
    /// any node that has been localized.
    pub fn anchor(&self) -> Option<Position<T>> {
        (self.b.state == LocState::Localizable).then_some(self.position).flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TeMessage<T = f64> {
    Candidate(ParentCandidate<T>),
    /// "Do you hear either of these two nodes?"
    Query { pair: (NodeId, NodeId) },
    Confirm { pair: (NodeId, NodeId) },
}

/// One node running directed triangle extension and dual-v detection.
#[derive(Clone, Debug)]
pub struct TeNode<T = f64> {
    id: NodeId,
    beacon: bool,
    myp: BranchTuple,
    position: Option<Position<T>>,
    root_positions: Option<[Position<T>; 2]>,
    heard: BTreeMap<NodeId, ParentCandidate<T>>,
    rescan_due: bool,
    queried: BTreeSet<(NodeId, NodeId)>,
    confirm_pending: bool,
    /// How many times the parent/root pair was written.
    pub assignments: usize,
}

impl<T: Scalar> TeNode<T> {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            beacon: false,
            myp: BranchTuple::flexible(),
            position: None,
            root_positions: None,
            heard: BTreeMap::new(),
            rescan_due: false,
            queried: BTreeSet::new(),
            confirm_pending: false,
            assignments: 0,
        }
    }

    pub fn tuple(&self) -> BranchTuple {
        self.myp
    }

    fn candidate(&self, bridge: Option<(NodeId, NodeId)>) -> ParentCandidate<T> {
        ParentCandidate {
            id: self.id,
            beacon: self.beacon,
            b: self.myp,
            position: self.position,
            root_positions: self.root_positions,
            bridge,
        }
    }

    fn become_localizable(
        &mut self,
        ctx: &NodeCtx<'_, T>,
        bridge: Option<(NodeId, NodeId)>,
        out: &mut Outbox<TeMessage<T>>,
    ) {
        if self.myp.state == LocState::Rigid {
            self.myp.state = LocState::Localizable;
            self.position = Some(ctx.resolved_position());
            out.broadcast(MessageKind::State, TeMessage::Candidate(self.candidate(bridge)));
        }
    }

    /// Directed extension with `pi` as the newly received candidate. The
    /// first matching pair wins.
    fn extend(&mut self, pi: &ParentCandidate<T>) -> bool {
        for pj in self.heard.values() {
            if pj.id == pi.id {
                continue;
            }
            let roots = match (pi.anchor(), pj.anchor()) {
                (Some(a), Some(b)) => {
                    let (r, pos) = if pi.id < pj.id { ((pi.id, pj.id), [a, b]) } else { ((pj.id, pi.id), [b, a]) };
                    Some((r, pos))
                }
                (Some(_), None) if pj.b.has_parent(pi.id) => pj.b.roots.zip(pj.root_positions),
                _ if pj.b.state == LocState::Localizable && pi.b.has_parent(pj.id) => pi.b.roots.zip(pi.root_positions),
                _ if pi.b.has_parent(pj.id) || pj.b.has_parent(pi.id) => pi.b.roots.zip(pi.root_positions),
                _ => None,
            };
            if let Some((roots, pos)) = roots {
                self.myp = BranchTuple {
                    state: LocState::Rigid,
                    parents: Some(sorted_pair(pi.id, pj.id)),
                    roots: Some(roots),
                };
                self.root_positions = Some(pos);
                self.assignments += 1;
                return true;
            }
        }
        false
    }

    /// Detection against one candidate while rigid.
    fn detect(&mut self, ctx: &NodeCtx<'_, T>, pn: &ParentCandidate<T>, out: &mut Outbox<TeMessage<T>>) {
        if self.myp.state != LocState::Rigid {
            return;
        }
        let [ra, rb] = self.root_positions.expect("rigid nodes know their roots");
        if let Some(q) = pn.anchor() {
            // A localized neighbour outside my roots and parents closes the
            // branch.
            if !self.myp.has_root(pn.id) && !self.myp.has_parent(pn.id) && non_collinear(&[ra, rb, q]) {
                self.become_localizable(ctx, None, out);
                return;
            }
        }
        if pn.b.state == LocState::Localizable {
            let child = pn.b.has_parent(self.id);
            let bridged = pn.bridge.is_some_and(|(a, b)| a == self.id || b == self.id);
            if child || bridged {
                self.become_localizable(ctx, None, out);
                return;
            }
        }
        let (Some(foreign), Some([rc, rd])) = (pn.b.roots, pn.root_positions) else {
            return;
        };
        if Some(foreign) == self.myp.roots || !non_collinear(&[ra, rb, rc, rd]) {
            return;
        }
        // Dual-V-Topo: pn and a second node of the same foreign block,
        // joined by a parent link, both my neighbours. My parents are asked
        // whether they hear either one.
        if self.myp.has_parent(pn.id) {
            return;
        }
        let partner = self.heard.values().find(|pi| {
            pi.id != pn.id
                && pi.b.roots == Some(foreign)
                && !self.myp.has_parent(pi.id)
                && (pi.b.has_parent(pn.id) || pn.b.has_parent(pi.id))
        });
        let Some(pi) = partner else { return };
        let pair = sorted_pair(pn.id, pi.id);
        if !self.queried.insert(pair) {
            return;
        }
        let (p1, p2) = self.myp.parents.expect("rigid nodes have parents");
        for p in [p1, p2] {
            out.send_to(MessageKind::Query, p, TeMessage::Query { pair });
        }
    }

    fn rescan(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<TeMessage<T>>) {
        let all: Vec<ParentCandidate<T>> = self.heard.values().copied().collect();
        for pn in &all {
            self.detect(ctx, pn, out);
        }
    }
}

impl<T: Scalar> NodeProtocol<T> for TeNode<T> {
    type Payload = TeMessage<T>;

    fn init(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<TeMessage<T>>) {
        if ctx.is_beacon() {
            self.beacon = true;
            self.myp.state = LocState::Localizable;
            self.position = Some(ctx.resolved_position());
            out.broadcast(MessageKind::State, TeMessage::Candidate(self.candidate(None)));
        }
    }

    fn on_round(&mut self, ctx: &NodeCtx<'_, T>, inbox: &[Message<TeMessage<T>>], out: &mut Outbox<TeMessage<T>>) {
        if self.confirm_pending {
            self.confirm_pending = false;
            self.become_localizable(ctx, None, out);
        }
        if self.rescan_due {
            self.rescan_due = false;
            self.rescan(ctx, out);
        }
        for m in inbox {
            match m.payload {
                TeMessage::Candidate(p) => {
                    self.heard.insert(p.id, p);
                    if self.beacon {
                        continue;
                    }
                    match self.myp.state {
                        LocState::Flexible => {
                            if self.extend(&p) {
                                self.rescan_due = true;
                                out.broadcast(MessageKind::State, TeMessage::Candidate(self.candidate(None)));
                            }
                        }
                        LocState::Rigid => self.detect(ctx, &p, out),
                        LocState::Localizable => {}
                    }
                }
                TeMessage::Query { pair } => {
                    if self.heard.contains_key(&pair.0) || self.heard.contains_key(&pair.1) {
                        out.send_to(MessageKind::Confirm, m.sender, TeMessage::Confirm { pair });
                        if self.myp.state == LocState::Rigid {
                            self.confirm_pending = true;
                        }
                    }
                }
                TeMessage::Confirm { pair } => {
                    self.become_localizable(ctx, Some(pair), out);
                }
            }
        }
    }

    fn state(&self) -> LocState {
        self.myp.state
    }
}
