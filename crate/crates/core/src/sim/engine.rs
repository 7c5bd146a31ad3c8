use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{LocState, Message, MessageKind, NodeCtx, NodeProtocol, Outbox};
use crate::graph::{NetworkGraph, NodeId, Position};
use crate::Scalar;

/// Scripted node movement applied at the start of `round`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduledMove<T = f64> {
    pub round: usize,
    pub moves: Vec<(NodeId, Position<T>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub round: usize,
    pub node: NodeId,
    pub from: LocState,
    pub to: LocState,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub protocol: String,
    pub rounds_executed: usize,
    pub converged: bool,
    /// STATE broadcasts per node.
    pub broadcasts_per_node: Vec<usize>,
    /// QUERY and CONFIRM messages per node.
    pub control_per_node: Vec<usize>,
    pub setup_messages: usize,
    /// STATE messages re-delivered over links created by movement.
    pub reannounced: usize,
    pub initial_states: Vec<LocState>,
    pub transitions: Vec<Transition>,
    pub final_states: Vec<LocState>,
}

impl RunTrace {
    pub fn total_broadcasts(&self) -> usize {
        self.broadcasts_per_node.iter().sum()
    }

    pub fn localizable(&self) -> Vec<NodeId> {
        self.final_states
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == LocState::Localizable)
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    /// States after round `round` has been handled.
    pub fn states_at(&self, round: usize) -> Vec<LocState> {
        let mut states = self.initial_states.clone();
        for t in self.transitions.iter().take_while(|t| t.round <= round) {
            states[t.node.index()] = t.to;
        }
        states
    }

    /// Nodes grouped by the round in which they reached `state`.
    pub fn sequence(&self, state: LocState) -> Vec<(usize, Vec<NodeId>)> {
        let mut out: Vec<(usize, Vec<NodeId>)> = Vec::new();
        for t in self.transitions.iter().filter(|t| t.to == state) {
            match out.last_mut() {
                Some((r, group)) if *r == t.round => group.push(t.node),
                _ => out.push((t.round, vec![t.node])),
            }
        }
        out
    }
}

/// Last round with a state transition; the budget when the run was cut off.
pub fn convergence_round(trace: &RunTrace) -> usize {
    if !trace.converged {
        return trace.rounds_executed;
    }
    trace.transitions.last().map_or(0, |t| t.round)
}

#[derive(Clone, Debug)]
pub struct RunOptions<T = f64> {
    pub budget: usize,
    pub schedule: Vec<ScheduledMove<T>>,
}

impl<T> RunOptions<T> {
    /// Ten rounds per node.
    pub fn for_size(nodes: usize) -> Self {
        Self {
            budget: 10 * nodes,
            schedule: Vec::new(),
        }
    }
}

struct InFlight<P> {
    recipient: NodeId,
    message: Message<P>,
}

/// Runs one protocol instance per node until two consecutive quiet rounds
/// (no transition and nothing sent) or the budget is exhausted.
pub fn run_nodes<T, N>(
    net: &NetworkGraph<T>,
    nodes: &mut [N],
    options: &RunOptions<T>,
    protocol: &str,
) -> RunTrace
where
    T: Scalar,
    N: NodeProtocol<T>,
{
    let n = net.node_count();
    assert_eq!(nodes.len(), n, "one protocol instance per node");
    let mut net = net.clone();
    let mut trace = RunTrace {
        protocol: protocol.to_string(),
        rounds_executed: 0,
        converged: false,
        broadcasts_per_node: vec![0; n],
        control_per_node: vec![0; n],
        setup_messages: 0,
        reannounced: 0,
        initial_states: Vec::new(),
        transitions: Vec::new(),
        final_states: Vec::new(),
    };
    let mut history: Vec<Vec<Message<N::Payload>>> = vec![Vec::new(); n];
    let mut pending: Vec<InFlight<N::Payload>> = Vec::new();

    let mut outbox = Outbox::default();
    for v in 0..n {
        let ctx = NodeCtx {
            id: NodeId(v),
            round: 0,
            net: &net,
        };
        nodes[v].init(&ctx, &mut outbox);
        dispatch(&net, NodeId(v), &mut outbox, &mut pending, &mut history, &mut trace);
    }
    trace.initial_states = nodes.iter().map(|p| p.state()).collect();
    let mut states = trace.initial_states.clone();

    let mut schedule = options.schedule.clone();
    schedule.sort_by_key(|s| s.round);
    let mut next_move = 0;
    let mut quiet = 0;
    let mut round = 0;
    while round < options.budget {
        round += 1;
        let mut deliveries = std::mem::take(&mut pending);
        while next_move < schedule.len() && schedule[next_move].round <= round {
            let before = net.clone();
            net = net.with_moved(&schedule[next_move].moves);
            next_move += 1;
            for v in net.ids() {
                for w in net.neighbors(v) {
                    if !before.are_neighbors(v, w) {
                        for m in &history[w.index()] {
                            deliveries.push(InFlight {
                                recipient: v,
                                message: m.clone(),
                            });
                            trace.reannounced += 1;
                        }
                    }
                }
            }
        }
        let mut inboxes: Vec<Vec<Message<N::Payload>>> = (0..n).map(|_| Vec::new()).collect();
        // Stable sort keeps send order within one sender.
        deliveries.sort_by_key(|d| d.message.sender);
        for d in deliveries {
            inboxes[d.recipient.index()].push(d.message);
        }

        let mut active = false;
        for v in 0..n {
            let ctx = NodeCtx {
                id: NodeId(v),
                round,
                net: &net,
            };
            nodes[v].on_round(&ctx, &inboxes[v], &mut outbox);
            active |= !outbox.is_empty();
            dispatch(&net, NodeId(v), &mut outbox, &mut pending, &mut history, &mut trace);
            let now = nodes[v].state();
            if now != states[v] {
                debug_assert!(now > states[v], "states only move forward");
                trace.transitions.push(Transition {
                    round,
                    node: NodeId(v),
                    from: states[v],
                    to: now,
                });
                states[v] = now;
                active = true;
            }
        }
        quiet = if active { 0 } else { quiet + 1 };
        if quiet >= 2 && next_move == schedule.len() {
            trace.converged = true;
            break;
        }
    }
    trace.rounds_executed = round;
    trace.final_states = states;
    trace
}

fn dispatch<T: Scalar, P: Clone>(
    net: &NetworkGraph<T>,
    sender: NodeId,
    outbox: &mut Outbox<P>,
    pending: &mut Vec<InFlight<P>>,
    history: &mut [Vec<Message<P>>],
    trace: &mut RunTrace,
) {
    for (kind, to, payload) in outbox.sent.drain(..) {
        match kind {
            MessageKind::State => trace.broadcasts_per_node[sender.index()] += 1,
            MessageKind::Query | MessageKind::Confirm => trace.control_per_node[sender.index()] += 1,
            MessageKind::Setup => trace.setup_messages += 1,
        }
        let message = Message {
            kind,
            sender,
            to,
            payload,
        };
        let recipients: BTreeSet<NodeId> = match to {
            Some(t) if net.are_neighbors(sender, t) => BTreeSet::from([t]),
            Some(_) => BTreeSet::new(),
            None => net.neighbors(sender).collect(),
        };
        for r in recipients {
            pending.push(InFlight {
                recipient: r,
                message: message.clone(),
            });
        }
        if kind == MessageKind::State && to.is_none() {
            history[sender.index()].push(message);
        }
    }
}
