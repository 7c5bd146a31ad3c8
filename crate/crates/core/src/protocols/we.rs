use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::non_collinear;
use crate::graph::{NodeId, Position};
use crate::sim::{LocState, Message, MessageKind, NodeCtx, NodeProtocol, Outbox};
use crate::Scalar;

/// DFS steps a hub may spend per wheel search.
pub const WHEEL_SEARCH_BUDGET: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum WeMessage<T> {
    /// The sender's neighbour list, exchanged once before detection.
    Setup(Vec<NodeId>),
    Localized(Position<T>),
    /// A wheel found by the sender (the hub); `rim` lists the cycle.
    Wheel { rim: Vec<NodeId> },
}

/// Searches for a rim cycle among the hub's neighbours such that the wheel
/// holds at least three localizable, non-collinear nodes and at least one
/// node that is not yet localizable.
///
/// `rim_adj` is the adjacency among the hub's neighbours, `known` the
/// positions of localizable neighbours and `hub_pos` the hub's own
/// position if it is localizable. A path is grown by DFS from a start
/// vertex until it satisfies the condition, then closed back to the start
/// by a shortest detour around it.
pub fn find_wheel<T: Scalar>(
    rim_adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    known: &BTreeMap<NodeId, Position<T>>,
    hub_pos: Option<Position<T>>,
    budget: usize,
) -> Option<Vec<NodeId>> {
    let order = |set: &BTreeSet<NodeId>| -> Vec<NodeId> {
        let mut v: Vec<NodeId> = set.iter().copied().collect();
        v.sort_by_key(|x| (!known.contains_key(x), *x));
        v
    };
    let satisfied = |path: &[NodeId]| -> bool {
        let mut pts: Vec<Position<T>> = path.iter().filter_map(|v| known.get(v).copied()).collect();
        let mut fresh = pts.len() < path.len();
        match hub_pos {
            Some(p) => pts.push(p),
            None => fresh = true,
        }
        fresh && pts.len() >= 3 && non_collinear(&pts)
    };
    // With a localized hub the wheel must gain some rim node, so the search
    // starts there; otherwise from a localized rim node.
    let starts: Vec<NodeId> = rim_adj
        .keys()
        .copied()
        .filter(|v| known.contains_key(v) != hub_pos.is_some())
        .collect();
    let mut steps = 0usize;
    for s in starts {
        let mut path = vec![s];
        let mut on_path = BTreeSet::from([s]);
        let mut stack: Vec<std::vec::IntoIter<NodeId>> = vec![order(&rim_adj[&s]).into_iter()];
        while let Some(it) = stack.last_mut() {
            let Some(next) = it.next() else {
                stack.pop();
                if let Some(v) = path.pop() {
                    on_path.remove(&v);
                }
                continue;
            };
            steps += 1;
            if steps > budget {
                return None;
            }
            if on_path.contains(&next) {
                continue;
            }
            path.push(next);
            on_path.insert(next);
            if satisfied(&path) {
                steps += rim_adj.len();
                if let Some(detour) = close_cycle(rim_adj, &path, &on_path) {
                    path.extend(detour);
                    return Some(path);
                }
            }
            stack.push(order(&rim_adj[&next]).into_iter());
        }
    }
    None
}

/// Interior vertices of a shortest path from the end of `path` back to its
/// start that avoids the rest of `path`, such that the closed cycle has at
/// least three vertices.
fn close_cycle(
    rim_adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    path: &[NodeId],
    on_path: &BTreeSet<NodeId>,
) -> Option<Vec<NodeId>> {
    let (start, end) = (path[0], *path.last()?);
    if path.len() >= 3 && rim_adj[&end].contains(&start) {
        return Some(Vec::new());
    }
    let mut prev: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut queue = VecDeque::from([end]);
    while let Some(x) = queue.pop_front() {
        for &y in &rim_adj[&x] {
            if y == start && x != end {
                let mut detour = vec![x];
                let mut cur = x;
                while let Some(&p) = prev.get(&cur) {
                    if p == end {
                        break;
                    }
                    detour.push(p);
                    cur = p;
                }
                detour.reverse();
                return Some(detour);
            }
            if on_path.contains(&y) || prev.contains_key(&y) {
                continue;
            }
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    None
}

/// Wheel extension: a hub marks every member of a qualifying wheel
/// localizable.
#[derive(Clone, Debug)]
pub struct WeNode<T> {
    id: NodeId,
    state: LocState,
    neighbours: BTreeSet<NodeId>,
    lists: BTreeMap<NodeId, Vec<NodeId>>,
    known: BTreeMap<NodeId, Position<T>>,
    dirty: bool,
    /// Rims already announced by this hub.
    announced: BTreeSet<Vec<NodeId>>,
}

impl<T: Scalar> WeNode<T> {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            state: LocState::Flexible,
            neighbours: BTreeSet::new(),
            lists: BTreeMap::new(),
            known: BTreeMap::new(),
            dirty: false,
            announced: BTreeSet::new(),
        }
    }

    fn rim_adjacency(&self) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            self.neighbours.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (&a, list) in &self.lists {
            if !self.neighbours.contains(&a) {
                continue;
            }
            for &b in list {
                if b != a && self.neighbours.contains(&b) {
                    adj.get_mut(&a).unwrap().insert(b);
                    adj.get_mut(&b).unwrap().insert(a);
                }
            }
        }
        adj
    }

    fn localize(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<WeMessage<T>>) {
        if self.state != LocState::Localizable {
            self.state = LocState::Localizable;
            self.dirty = true;
            out.broadcast(MessageKind::State, WeMessage::Localized(ctx.resolved_position()));
        }
    }
}

impl<T: Scalar> NodeProtocol<T> for WeNode<T> {
    type Payload = WeMessage<T>;

    fn init(&mut self, ctx: &NodeCtx<'_, T>, out: &mut Outbox<WeMessage<T>>) {
        self.neighbours = ctx.neighbors().collect();
        out.broadcast(MessageKind::Setup, WeMessage::Setup(self.neighbours.iter().copied().collect()));
        if ctx.is_beacon() {
            self.localize(ctx, out);
        }
    }

    fn on_round(&mut self, ctx: &NodeCtx<'_, T>, inbox: &[Message<WeMessage<T>>], out: &mut Outbox<WeMessage<T>>) {
        let current: BTreeSet<NodeId> = ctx.neighbors().collect();
        if current != self.neighbours {
            self.neighbours = current;
            self.dirty = true;
        }
        for m in inbox {
            match &m.payload {
                WeMessage::Setup(list) => {
                    self.lists.insert(m.sender, list.clone());
                    self.dirty = true;
                }
                WeMessage::Localized(p) => {
                    self.known.insert(m.sender, *p);
                    self.dirty = true;
                }
                WeMessage::Wheel { rim } => {
                    if rim.contains(&self.id) {
                        self.localize(ctx, out);
                    }
                }
            }
        }
        if !self.dirty {
            return;
        }
        self.dirty = false;
        let known: BTreeMap<NodeId, Position<T>> = self
            .known
            .iter()
            .filter(|(v, _)| self.neighbours.contains(v))
            .map(|(&v, &p)| (v, p))
            .collect();
        let hub_pos = (self.state == LocState::Localizable).then(|| ctx.resolved_position());
        if let Some(rim) = find_wheel(&self.rim_adjacency(), &known, hub_pos, WHEEL_SEARCH_BUDGET) {
            if self.announced.insert(rim.clone()) {
                out.broadcast(MessageKind::State, WeMessage::Wheel { rim });
            }
            self.localize(ctx, out);
        }
    }

    fn state(&self) -> LocState {
        self.state
    }
}
