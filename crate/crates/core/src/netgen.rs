//! Random network generation: cell-grid placement, beacon deployment and
//! holes.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_network, NetworkGraph, NodeId, Position, Region};
use crate::Scalar;

/// How beacons are chosen among the generated nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BeaconMode {
    #[default]
    Random,
    /// A share of the beacons is drawn from two opposite corner squares.
    Skewed { corner_fraction: f64 },
    Explicit { ids: Vec<NodeId> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Node count.
    #[serde(rename = "S")]
    pub nodes: usize,
    /// Cells per side of the deployment square.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Unit distance in meters.
    #[serde(rename = "D0", default = "default_d0")]
    pub d0: f64,
    /// Network density factor; the cell side is `D0 * N`.
    #[serde(rename = "N")]
    pub density: f64,
    /// Beacon density; beacon count is `round(B * S)`.
    #[serde(rename = "B")]
    pub beacon_density: f64,
    #[serde(default = "default_radius_factor")]
    pub radius_factor: f64,
    #[serde(default)]
    pub beacon_mode: BeaconMode,
    /// When set, nodes are placed uniformly (no cells) and those inside the
    /// region are removed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole: Option<Region>,
    #[serde(default)]
    pub seed: u64,
}

fn default_grid() -> usize {
    20
}

fn default_d0() -> f64 {
    10.0
}

fn default_radius_factor() -> f64 {
    6.0
}

impl ExperimentConfig {
    /// Random beacons on the smallest square grid holding `nodes` cells.
    pub fn new(nodes: usize, density: f64, beacon_density: f64, seed: u64) -> Self {
        Self {
            nodes,
            grid: (nodes as f64).sqrt().ceil() as usize,
            d0: default_d0(),
            density,
            beacon_density,
            radius_factor: default_radius_factor(),
            beacon_mode: BeaconMode::Random,
            hole: None,
            seed,
        }
    }

    pub fn cell_side(&self) -> f64 {
        self.d0 * self.density
    }

    /// Side of the deployment square in meters.
    pub fn side(&self) -> f64 {
        self.grid as f64 * self.cell_side()
    }

    pub fn radius(&self) -> f64 {
        self.radius_factor * self.d0
    }

    pub fn beacon_count(&self, nodes: usize) -> usize {
        match &self.beacon_mode {
            BeaconMode::Explicit { ids } => ids.len(),
            _ => (self.beacon_density * nodes as f64).round() as usize,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.nodes < 2 {
            return Err(Error::TooFewNodes {
                needed: 2,
                got: self.nodes,
            });
        }
        if self.grid == 0 || !(self.d0 > 0.0) || !(self.density > 0.0) {
            return bad("grid, D0 and N must be positive");
        }
        if !(self.radius_factor > 0.0) {
            return Err(Error::BadRadius);
        }
        if self.hole.is_none() && self.nodes > self.grid * self.grid {
            return bad("more nodes than grid cells");
        }
        if let BeaconMode::Skewed { corner_fraction } = self.beacon_mode {
            if !(0.0..=1.0).contains(&corner_fraction) {
                return bad("corner_fraction must lie in [0, 1]");
            }
        }
        if !matches!(self.beacon_mode, BeaconMode::Explicit { .. })
            && !(self.beacon_density > 0.0 && self.beacon_density <= 1.0)
        {
            return bad("B must lie in (0, 1]");
        }
        let count = self.beacon_count(self.nodes);
        if count < 2 {
            return Err(Error::TooFewBeacons {
                needed: 2,
                got: count,
            });
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generates a network deterministically from the configuration.
pub fn generate<T: Scalar>(config: &ExperimentConfig) -> Result<NetworkGraph<T>> {
    config.validate()?;
    let mut rng = rng_for(config.seed);
    let radius = T::of(config.radius());
    let mut net = match config.hole {
        None => build_network(cell_positions(config, &mut rng), &[], radius)?,
        Some(region) => {
            let side = config.side();
            let positions = (0..config.nodes)
                .map(|_| {
                    Position::new(T::of(rng.gen_range(0.0..side)), T::of(rng.gen_range(0.0..side)))
                })
                .collect();
            let net = build_network(positions, &[], radius)?;
            inject_hole(&net, region)?
        }
    };
    let count = config.beacon_count(net.node_count());
    if count < 2 {
        return Err(Error::TooFewBeacons {
            needed: 2,
            got: count,
        });
    }
    net = match &config.beacon_mode {
        BeaconMode::Random => place_beacons_random(&net, count, &mut rng)?,
        BeaconMode::Skewed { corner_fraction } => {
            place_beacons_skewed(&net, count, *corner_fraction, config.side(), &mut rng)?
        }
        BeaconMode::Explicit { ids } => {
            if let Some(bad) = ids.iter().find(|v| v.index() >= net.node_count()) {
                return Err(Error::InvalidConfig(format!("beacon id {bad} out of range")));
            }
            let mut out = net;
            out.set_beacons(ids);
            out
        }
    };
    Ok(net)
}

/// One node uniformly inside each chosen cell, cells in row-major order.
fn cell_positions<T: Scalar, R: Rng>(config: &ExperimentConfig, rng: &mut R) -> Vec<Position<T>> {
    let cells = config.grid * config.grid;
    let mut chosen: Vec<usize> = if config.nodes == cells {
        (0..cells).collect()
    } else {
        index::sample(rng, cells, config.nodes).into_vec()
    };
    chosen.sort_unstable();
    let side = config.cell_side();
    chosen
        .into_iter()
        .map(|c| {
            let (row, col) = (c / config.grid, c % config.grid);
            let x = (col as f64 + rng.gen::<f64>()) * side;
            let y = (row as f64 + rng.gen::<f64>()) * side;
            Position::new(T::of(x), T::of(y))
        })
        .collect()
}

/// Removes every node inside `region`; the rest keep their order and are
/// renumbered densely.
pub fn inject_hole<T: Scalar>(net: &NetworkGraph<T>, region: Region) -> Result<NetworkGraph<T>> {
    let keep: Vec<NodeId> = net.ids().filter(|&v| !region.contains(net.position(v))).collect();
    if keep.len() < 3 {
        return Err(Error::TooFewNodes {
            needed: 3,
            got: keep.len(),
        });
    }
    let mut out = net.retain(&keep)?;
    out.hole = Some(region);
    Ok(out)
}

const PAIR_RETRIES: usize = 10_000;

fn has_common_neighbor<T: Scalar>(net: &NetworkGraph<T>, a: NodeId, b: NodeId) -> bool {
    net.neighbors(a).any(|w| net.are_neighbors(w, b))
}

/// Draws `count` beacons by `draw`, retrying while a lone pair shares no
/// radio neighbor.
fn draw_with_pair_rule<T: Scalar, R: Rng>(
    net: &NetworkGraph<T>,
    count: usize,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Vec<NodeId>,
) -> Result<NetworkGraph<T>> {
    if count > net.node_count() {
        return Err(Error::TooManyBeacons {
            count,
            nodes: net.node_count(),
        });
    }
    let mut chosen = draw(rng);
    if count == 2 {
        let mut tries = 0;
        while !has_common_neighbor(net, chosen[0], chosen[1]) {
            tries += 1;
            if tries == PAIR_RETRIES {
                return Err(Error::InvalidConfig(
                    "no beacon pair with a common neighbor found".into(),
                ));
            }
            chosen = draw(rng);
        }
    }
    let mut out = net.clone();
    out.set_beacons(&chosen);
    Ok(out)
}

pub fn place_beacons_random<T: Scalar, R: Rng>(
    net: &NetworkGraph<T>,
    count: usize,
    rng: &mut R,
) -> Result<NetworkGraph<T>> {
    let n = net.node_count();
    draw_with_pair_rule(net, count, rng, |rng| sample_ids(rng, n, count))
}

fn sample_ids<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = index::sample(rng, n, count).into_iter().map(NodeId).collect();
    ids.sort_unstable();
    ids
}

/// The two opposite corner squares of side `side / 4`.
pub fn corner_regions(side: f64) -> [Region; 2] {
    let q = side / 4.0;
    [
        Region::Rect {
            x0: 0.0,
            y0: 0.0,
            x1: q,
            y1: q,
        },
        Region::Rect {
            x0: side - q,
            y0: side - q,
            x1: side,
            y1: side,
        },
    ]
}

/// Places `round(corner_fraction * count)` beacons inside the two corner
/// squares and the rest anywhere else.
pub fn place_beacons_skewed<T: Scalar, R: Rng>(
    net: &NetworkGraph<T>,
    count: usize,
    corner_fraction: f64,
    side: f64,
    rng: &mut R,
) -> Result<NetworkGraph<T>> {
    if corner_fraction <= 0.0 {
        return place_beacons_random(net, count, rng);
    }
    let corners = corner_regions(side);
    let in_corner: Vec<NodeId> = net
        .ids()
        .filter(|&v| corners.iter().any(|r| r.contains(net.position(v))))
        .collect();
    let outside: Vec<NodeId> = net
        .ids()
        .filter(|&v| !corners.iter().any(|r| r.contains(net.position(v))))
        .collect();
    let want = ((corner_fraction * count as f64).round() as usize).min(count);
    draw_with_pair_rule(net, count, rng, |rng| {
        let from_corner = want.min(in_corner.len());
        let rest = count - from_corner;
        let mut chosen: Vec<NodeId> = in_corner.choose_multiple(rng, from_corner).copied().collect();
        if rest <= outside.len() {
            chosen.extend(outside.choose_multiple(rng, rest).copied());
        } else {
            chosen.extend(outside.iter().copied());
            let spare: Vec<NodeId> =
                in_corner.iter().copied().filter(|v| !chosen.contains(v)).collect();
            chosen.extend(spare.choose_multiple(rng, count - chosen.len()).copied());
        }
        chosen.sort_unstable();
        chosen
    })
}
