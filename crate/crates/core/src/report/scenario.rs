use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{RunReport, DEFAULT_SECONDS_PER_ROUND};
use crate::error::{Error, Result};
use crate::graph::{NetworkDocument, NetworkGraph, NodeId, Position, Region};
use crate::netgen::{generate, BeaconMode, ExperimentConfig};
use crate::oracle::{rr3p_localizable_set, ORACLE_NODE_LIMIT};
use crate::protocols::{self, Protocol};
use crate::sim::{RunOptions, RunTrace, ScheduledMove};
use crate::Scalar;

pub const SCENARIOS: [&str; 11] = [
    "gap", "border", "gc_ring", "dual_v", "chain", "sparse4", "hole_T0", "hole_T1", "hole_T2", "exp1",
    "exp2",
];

#[derive(Deserialize)]
struct Fixture {
    network: NetworkDocument,
    #[serde(default)]
    moves: Vec<FixtureMove>,
}

#[derive(Deserialize)]
struct FixtureMove {
    round: usize,
    label: String,
    x: f64,
    y: f64,
}

fn fixture_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "gap" => include_str!("../../fixtures/gap.json"),
        "border" => include_str!("../../fixtures/border.json"),
        "gc_ring" => include_str!("../../fixtures/gc_ring.json"),
        "dual_v" => include_str!("../../fixtures/dual_v.json"),
        "chain" => include_str!("../../fixtures/chain.json"),
        "exp1" => include_str!("../../fixtures/exp1.json"),
        "exp2" => include_str!("../../fixtures/exp2.json"),
        _ => return None,
    })
}

/// A ready-to-run topology with its movement script.
#[derive(Clone, Debug)]
pub struct Scenario<T = f64> {
    pub name: String,
    pub note: String,
    pub net: NetworkGraph<T>,
    pub options: RunOptions<T>,
    pub config: Option<ExperimentConfig>,
}

impl<T: Scalar> Scenario<T> {
    /// Node by label; panics on unknown labels, which are fixture bugs.
    pub fn node(&self, label: &str) -> NodeId {
        self.net
            .by_label(label)
            .unwrap_or_else(|| panic!("scenario {} has no node {label}", self.name))
    }

    /// Topology after every scripted move.
    pub fn final_network(&self) -> NetworkGraph<T> {
        let mut net = self.net.clone();
        for step in &self.options.schedule {
            net = net.with_moved(&step.moves);
        }
        net
    }

    pub fn run(&self, protocol: Protocol) -> Result<RunTrace> {
        protocols::run(&self.net, protocol, &self.options)
    }
}

/// Uniform placement with a central disc-shaped hole of radius `side / 4`.
pub fn hole_config(density: f64, beacon_density: f64, mode: BeaconMode, seed: u64) -> ExperimentConfig {
    let mut config = ExperimentConfig::new(400, density, beacon_density, seed);
    let side = config.side();
    config.hole = Some(Region::Disc {
        cx: side / 2.0,
        cy: side / 2.0,
        r: side / 4.0,
    });
    config.beacon_mode = mode;
    config
}

/// Share of beacons drawn from the two corner squares in the skewed layout.
pub const SKEWED_CORNER_FRACTION: f64 = 0.8;

const SPARSE4_SEED: u64 = 3;

fn nearest<T: Scalar>(net: &NetworkGraph<T>, x: f64, y: f64, skip: &[NodeId]) -> NodeId {
    let target = Position::new(T::of(x), T::of(y));
    net.ids()
        .filter(|v| !skip.contains(v))
        .min_by(|&a, &b| {
            let da = crate::graph::distance(net.position(a), target);
            let db = crate::graph::distance(net.position(b), target);
            da.partial_cmp(&db).expect("finite distances")
        })
        .expect("network is not empty")
}

/// 400 nodes on a 400 m square with four beacons: a close pair in one corner
/// and two far apart elsewhere, so no node hears three of them.
fn sparse4<T: Scalar>() -> Result<Scenario<T>> {
    let mut config = ExperimentConfig::new(400, 2.0, 0.01, SPARSE4_SEED);
    config.beacon_mode = BeaconMode::Explicit {
        ids: vec![NodeId(0), NodeId(1)],
    };
    let mut net = generate::<T>(&config)?;
    let side = config.side();
    let b1 = nearest(&net, 0.1 * side, 0.1 * side, &[]);
    let p = net.position(b1);
    let b2 = nearest(&net, p.x.as_f64(), p.y.as_f64(), &[b1]);
    let b3 = nearest(&net, 0.95 * side, 0.3 * side, &[]);
    let b4 = nearest(&net, 0.3 * side, 0.95 * side, &[]);
    let mut ids = vec![b1, b2, b3, b4];
    ids.sort_unstable();
    net.set_beacons(&ids);
    config.beacon_mode = BeaconMode::Explicit { ids };
    Ok(Scenario {
        name: "sparse4".into(),
        note: "Dense network, two beacons next to each other in one corner, two more far away.".into(),
        options: RunOptions::for_size(net.node_count()),
        net,
        config: Some(config),
    })
}

fn hole<T: Scalar>(name: &str) -> Result<Scenario<T>> {
    let (config, note) = match name {
        "hole_T0" => (
            hole_config(3.2, 0.1, BeaconMode::Random, 0),
            "Sparse network with a central hole, random beacons.",
        ),
        "hole_T1" => (
            hole_config(2.4, 0.05, BeaconMode::Random, 0),
            "Dense network with a central hole, random beacons.",
        ),
        _ => (
            hole_config(
                2.4,
                0.05,
                BeaconMode::Skewed {
                    corner_fraction: SKEWED_CORNER_FRACTION,
                },
                0,
            ),
            "Dense network with a central hole, beacons crowded into two corners.",
        ),
    };
    let net = generate::<T>(&config)?;
    Ok(Scenario {
        name: name.into(),
        note: note.into(),
        options: RunOptions::for_size(net.node_count()),
        net,
        config: Some(config),
    })
}

fn from_fixture<T: Scalar>(name: &str, text: &str) -> Result<Scenario<T>> {
    let fixture: Fixture = serde_json::from_str(text)?;
    let net = fixture.network.build::<T>()?;
    let mut by_round: BTreeMap<usize, Vec<(NodeId, Position<T>)>> = BTreeMap::new();
    for m in &fixture.moves {
        let v = net
            .by_label(&m.label)
            .ok_or_else(|| Error::InvalidConfig(format!("move of unknown node {}", m.label)))?;
        by_round
            .entry(m.round)
            .or_default()
            .push((v, Position::new(T::of(m.x), T::of(m.y))));
    }
    let mut options = RunOptions::for_size(net.node_count());
    options.schedule = by_round
        .into_iter()
        .map(|(round, moves)| ScheduledMove { round, moves })
        .collect();
    Ok(Scenario {
        name: name.into(),
        note: fixture.network.note.clone().unwrap_or_default(),
        net,
        options,
        config: None,
    })
}

pub fn load_scenario<T: Scalar>(name: &str) -> Result<Scenario<T>> {
    if let Some(text) = fixture_text(name) {
        return from_fixture(name, text);
    }
    match name {
        "sparse4" => sparse4(),
        "hole_T0" | "hole_T1" | "hole_T2" => hole(name),
        _ => Err(Error::UnknownScenario(name.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedRun {
    pub protocol: Protocol,
    pub reason: String,
}

/// Every protocol run on one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub note: String,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rr3p_size: Option<usize>,
    pub runs: Vec<RunReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedRun>,
}

impl ScenarioReport {
    pub fn run(&self, protocol: Protocol) -> Option<&RunReport> {
        self.runs.iter().find(|r| r.protocol == protocol.name())
    }

    pub fn is_sound(&self) -> bool {
        self.runs.iter().all(RunReport::is_sound)
    }
}

/// Runs all protocols on a built-in scenario and checks them against the
/// oracle on the final topology.
pub fn scenario(name: &str) -> Result<ScenarioReport> {
    let sc = load_scenario::<f64>(name)?;
    let final_net = sc.final_network();
    let oracle = if final_net.node_count() <= ORACLE_NODE_LIMIT {
        Some(rr3p_localizable_set(&final_net)?)
    } else {
        None
    };
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for protocol in Protocol::ALL {
        match sc.run(protocol) {
            Ok(trace) => {
                let mut report = RunReport::new(
                    format!("scenario:{name}"),
                    &sc.net,
                    &trace,
                    oracle.as_ref(),
                    DEFAULT_SECONDS_PER_ROUND,
                );
                report.config = sc.config.clone();
                runs.push(report);
            }
            Err(e @ Error::NetworkTooLarge { .. }) => skipped.push(SkippedRun {
                protocol,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(ScenarioReport {
        name: name.to_string(),
        note: sc.note.clone(),
        labels: sc.net.ids().map(|v| sc.net.label(v)).collect(),
        rr3p_size: oracle.map(|o| o.len()),
        runs,
        skipped,
    })
}
