//! Synchronous round-based message passing.
//!
//! Messages sent in round `r` reach the sender's radio neighbours (as of
//! round `r`) at round `r + 1`. Handlers run in ascending node order.

mod engine;

pub use engine::{convergence_round, run_nodes, RunOptions, RunTrace, ScheduledMove, Transition};

use serde::{Deserialize, Serialize};

use crate::graph::{NetworkGraph, NodeId, Position};
use crate::Scalar;

/// Detection state of one node. Only moves forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocState {
    Flexible,
    Rigid,
    Localizable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MessageKind {
    State,
    Query,
    Confirm,
    /// One-off neighbourhood exchange before detection starts.
    Setup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message<P> {
    pub kind: MessageKind,
    pub sender: NodeId,
    /// `None` for broadcasts.
    pub to: Option<NodeId>,
    pub payload: P,
}

/// What a node may see while handling a round.
pub struct NodeCtx<'a, T> {
    pub id: NodeId,
    pub round: usize,
    net: &'a NetworkGraph<T>,
}

impl<'a, T: Scalar> NodeCtx<'a, T> {
    pub fn is_beacon(&self) -> bool {
        self.net.is_beacon(self.id)
    }

    pub fn neighbors(&self) -> impl Iterator<Item = NodeId> + 'a {
        self.net.neighbors(self.id)
    }

    /// Beacon coordinates are part of the known constraints.
    pub fn beacon_position(&self, v: NodeId) -> Option<Position<T>> {
        (v.index() < self.net.node_count() && self.net.is_beacon(v)).then(|| self.net.position(v))
    }

    /// The node's own coordinates, standing in for a completed localization.
    /// Protocols read this only after they have declared the node
    /// localizable.
    pub fn resolved_position(&self) -> Position<T> {
        self.net.position(self.id)
    }
}

/// Outgoing messages of one handler invocation.
pub struct Outbox<P> {
    sent: Vec<(MessageKind, Option<NodeId>, P)>,
}

impl<P> Default for Outbox<P> {
    fn default() -> Self {
        Self { sent: Vec::new() }
    }
}

impl<P> Outbox<P> {
    pub fn broadcast(&mut self, kind: MessageKind, payload: P) {
        self.sent.push((kind, None, payload));
    }

    pub fn send_to(&mut self, kind: MessageKind, to: NodeId, payload: P) {
        self.sent.push((kind, Some(to), payload));
    }

    pub fn is_empty(&self) -> bool {
        self.sent.is_empty()
    }
}

/// Per-node protocol state machine.
pub trait NodeProtocol<T: Scalar> {
    type Payload: Clone;

    fn init(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<Self::Payload>);

    /// Called once per round with everything delivered this round (sorted
    /// by sender, then send order), possibly empty.
    fn on_round(
        &mut self,
        ctx: &NodeCtx<'_, T>,
        inbox: &[Message<Self::Payload>],
        out: &mut Outbox<Self::Payload>,
    );

    fn state(&self) -> LocState;
}
