use std::collections::BTreeMap;

use super::non_collinear;
use crate::graph::{NodeId, Position};
use crate::sim::{LocState, Message, MessageKind, NodeCtx, NodeProtocol, Outbox};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TpMessage<T> {
    Localized(Position<T>),
}

/// Trilateration: a node localizes once three non-collinear localized
/// neighbours are known.
#[derive(Clone, Debug)]
pub struct TpNode<T> {
    id: NodeId,
    state: LocState,
    anchors: BTreeMap<NodeId, Position<T>>,
}

impl<T: Scalar> TpNode<T> {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            state: LocState::Flexible,
            anchors: BTreeMap::new(),
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn anchors(&self) -> impl Iterator<Item = (NodeId, Position<T>)> + '_ {
        self.anchors.iter().map(|(&k, &v)| (k, v))
    }
}

impl<T: Scalar> NodeProtocol<T> for TpNode<T> {
    type Payload = TpMessage<T>;

    fn init(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<TpMessage<T>>) {
        if ctx.is_beacon() {
            self.state = LocState::Localizable;
            out.broadcast(MessageKind::State, TpMessage::Localized(ctx.resolved_position()));
        }
    }

    fn on_round(&mut self, ctx: &NodeCtx<'_, T>, inbox: &[Message<TpMessage<T>>], out: &mut Outbox<TpMessage<T>>) {
        if self.state == LocState::Localizable {
            return;
        }
        for m in inbox {
            let TpMessage::Localized(p) = m.payload;
            self.anchors.insert(m.sender, p);
        }
        if self.anchors.len() >= 3 {
            let pts: Vec<Position<T>> = self.anchors.values().copied().collect();
            if non_collinear(&pts) {
                self.state = LocState::Localizable;
                out.broadcast(MessageKind::State, TpMessage::Localized(ctx.resolved_position()));
            }
        }
    }

    fn state(&self) -> LocState {
        self.state
    }
}
