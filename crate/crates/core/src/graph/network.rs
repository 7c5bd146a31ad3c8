use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{distance, Graph, NodeId, Position};
use crate::error::{Error, Result};
use crate::Scalar;

/// A region of the deployment plane, used for holes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Region {
    Disc { cx: f64, cy: f64, r: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Region {
    pub fn contains<T: Scalar>(&self, p: Position<T>) -> bool {
        let (x, y) = (p.x.as_f64(), p.y.as_f64());
        match *self {
            Region::Disc { cx, cy, r } => (x - cx).hypot(y - cy) <= r,
            Region::Rect { x0, y0, x1, y1 } => {
                x >= x0.min(x1) && x <= x0.max(x1) && y >= y0.min(y1) && y <= y0.max(y1)
            }
        }
    }
}

/// One node entry of the network file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub beacon: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// On-disk network format. Edges are always derived from the radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub radius: f64,
    pub nodes: Vec<NodeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole: Option<Region>,
}

impl NetworkDocument {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn build<T: Scalar>(&self) -> Result<NetworkGraph<T>> {
        let mut ids = BTreeSet::new();
        for spec in &self.nodes {
            if !ids.insert(spec.id) {
                return Err(Error::DuplicateNode(spec.id));
            }
        }
        let n = self.nodes.len();
        if let Some(&last) = ids.iter().next_back() {
            if last.index() >= n {
                return Err(Error::SparseIds {
                    expected: n,
                    found: last,
                });
            }
        }
        let mut sorted: Vec<&NodeSpec> = self.nodes.iter().collect();
        sorted.sort_by_key(|s| s.id);
        let positions = sorted
            .iter()
            .map(|s| {
                if s.x.is_finite() && s.y.is_finite() {
                    Ok(Position::new(T::of(s.x), T::of(s.y)))
                } else {
                    Err(Error::NonFinite(s.id))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let beacons: Vec<bool> = sorted.iter().map(|s| s.beacon).collect();
        let mut net = build_network(positions, &beacons, T::of(self.radius))?;
        if sorted.iter().any(|s| s.label.is_some()) {
            net.labels = Some(
                sorted
                    .iter()
                    .map(|s| s.label.clone().unwrap_or_else(|| s.id.to_string()))
                    .collect(),
            );
        }
        net.hole = self.hole;
        Ok(net)
    }
}

/// Sensor network: node positions, beacon flags and unit-disk radio links.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkGraph<T = f64> {
    positions: Vec<Position<T>>,
    beacons: Vec<bool>,
    radius: T,
    radio: Graph,
    pub labels: Option<Vec<String>>,
    pub hole: Option<Region>,
}

/// Builds the unit-disk network: `i ~ j` iff `|p_i - p_j| <= radius`.
pub fn build_network<T: Scalar>(
    positions: Vec<Position<T>>,
    beacons: &[bool],
    radius: T,
) -> Result<NetworkGraph<T>> {
    if positions.len() < 2 {
        return Err(Error::TooFewNodes {
            needed: 2,
            got: positions.len(),
        });
    }
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::BadRadius);
    }
    if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite(NodeId(i)));
    }
    let mut flags = beacons.to_vec();
    flags.resize(positions.len(), false);
    let radio = unit_disk(&positions, radius);
    Ok(NetworkGraph {
        positions,
        beacons: flags,
        radius,
        radio,
        labels: None,
        hole: None,
    })
}

fn unit_disk<T: Scalar>(positions: &[Position<T>], radius: T) -> Graph {
    let n = positions.len();
    let mut g = Graph::new(n);
    // Bucket grid with cell side = radius keeps this near linear.
    let r = radius.as_f64();
    let key = |p: &Position<T>| {
        (
            (p.x.as_f64() / r).floor() as i64,
            (p.y.as_f64() / r).floor() as i64,
        )
    };
    let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
    for (i, p) in positions.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (i, p) in positions.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = buckets.get(&(cx + dx, cy + dy)) {
                    for &j in list {
                        if j > i && distance(*p, positions[j]) <= radius {
                            pairs.push((i, j));
                        }
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    for (i, j) in pairs {
        g.add_edge(i, j);
    }
    g
}

impl<T: Scalar> NetworkGraph<T> {
    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn position(&self, v: NodeId) -> Position<T> {
        self.positions[v.index()]
    }

    pub fn positions(&self) -> &[Position<T>] {
        &self.positions
    }

    pub fn is_beacon(&self, v: NodeId) -> bool {
        self.beacons[v.index()]
    }

    pub fn beacon_flags(&self) -> &[bool] {
        &self.beacons
    }

    pub fn beacons(&self) -> Vec<NodeId> {
        self.ids().filter(|&v| self.is_beacon(v)).collect()
    }

    pub fn beacon_count(&self) -> usize {
        self.beacons.iter().filter(|&&b| b).count()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.positions.len()).map(NodeId)
    }

    pub fn radio(&self) -> &Graph {
        &self.radio
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.radio.neighbors(v.index()).iter().map(|&u| NodeId(u))
    }

    pub fn are_neighbors(&self, a: NodeId, b: NodeId) -> bool {
        self.radio.has_edge(a.index(), b.index())
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> T {
        distance(self.position(a), self.position(b))
    }

    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(labels) => labels[v.index()].clone(),
            None => v.to_string(),
        }
    }

    /// Looks a node up by its label.
    pub fn by_label(&self, label: &str) -> Option<NodeId> {
        self.labels
            .as_ref()?
            .iter()
            .position(|l| l == label)
            .map(NodeId)
    }

    pub fn set_beacons(&mut self, beacons: &[NodeId]) {
        self.beacons.iter_mut().for_each(|b| *b = false);
        for &b in beacons {
            self.beacons[b.index()] = true;
        }
    }

    /// Same nodes with some positions replaced; adjacency is recomputed.
    pub fn with_moved(&self, moves: &[(NodeId, Position<T>)]) -> Self {
        let mut positions = self.positions.clone();
        for &(v, p) in moves {
            positions[v.index()] = p;
        }
        let radio = unit_disk(&positions, self.radius);
        Self {
            positions,
            radio,
            ..self.clone()
        }
    }

    /// Keeps only the listed nodes, renumbered densely in the given order.
    pub fn retain(&self, keep: &[NodeId]) -> Result<Self> {
        let positions: Vec<_> = keep.iter().map(|&v| self.position(v)).collect();
        let beacons: Vec<_> = keep.iter().map(|&v| self.is_beacon(v)).collect();
        let mut net = build_network(positions, &beacons, self.radius)?;
        net.labels = self
            .labels
            .as_ref()
            .map(|labels| keep.iter().map(|v| labels[v.index()].clone()).collect());
        net.hole = self.hole;
        Ok(net)
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            radius: self.radius.as_f64(),
            nodes: self
                .ids()
                .map(|v| NodeSpec {
                    id: v,
                    x: self.position(v).x.as_f64(),
                    y: self.position(v).y.as_f64(),
                    beacon: self.is_beacon(v),
                    label: self.labels.as_ref().map(|l| l[v.index()].clone()),
                })
                .collect(),
            note: None,
            hole: self.hole,
        }
    }

    pub fn cast<U: Scalar>(&self) -> NetworkGraph<U> {
        let positions = self.positions.iter().map(|p| p.cast()).collect();
        let mut net = build_network(positions, &self.beacons, U::of(self.radius.as_f64()))
            .expect("already validated");
        net.labels = self.labels.clone();
        net.hole = self.hole;
        net
    }
}
