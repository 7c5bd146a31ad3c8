//! Experiment harness: per-run metrics, energy estimates, density sweeps,
//! SVG state maps and the built-in scenario registry.

mod scenario;
mod svg;
mod sweep;

pub use scenario::{
    hole_config, load_scenario, scenario, Scenario, ScenarioReport, SkippedRun, SCENARIOS,
    SKEWED_CORNER_FRACTION,
};
pub use svg::{render_state_map, state_map_svg};
pub use sweep::{sweep, Stat, SweepCell, SweepSpec, SweepTable};

use serde::{Deserialize, Serialize};

use crate::graph::{NetworkGraph, NodeId};
use crate::netgen::ExperimentConfig;
use crate::oracle::LocalizabilitySet;
use crate::sim::{convergence_round, LocState, RunTrace};
use crate::Scalar;

/// 20 mA at 3 V.
pub const WATTS_PER_NODE: f64 = 0.06;

pub const DEFAULT_SECONDS_PER_ROUND: f64 = 1.0;

/// Energy in joules for `rounds` run cycles of `seconds_per_round` each.
pub fn energy_joules(rounds: usize, seconds_per_round: f64) -> f64 {
    WATTS_PER_NODE * rounds as f64 * seconds_per_round
}

/// Energy of a finished run, counting rounds up to the last transition.
pub fn energy_report(trace: &RunTrace, seconds_per_round: f64) -> f64 {
    debug_assert!(seconds_per_round > 0.0);
    energy_joules(convergence_round(trace), seconds_per_round)
}

/// Number of nodes in the localizable state, beacons included.
pub fn detected_count(trace: &RunTrace) -> usize {
    trace.final_states.iter().filter(|&&s| s == LocState::Localizable).count()
}

/// First round at which at least `fraction` of all nodes are localizable.
pub fn rounds_to_fraction(trace: &RunTrace, fraction: f64) -> Option<usize> {
    let n = trace.final_states.len();
    let need = (fraction * n as f64).ceil() as usize;
    let mut count = trace.initial_states.iter().filter(|&&s| s == LocState::Localizable).count();
    if count >= need {
        return Some(0);
    }
    for t in &trace.transitions {
        if t.to == LocState::Localizable {
            count += 1;
            if count >= need {
                return Some(t.round);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Where the network came from: a file, a scenario or a generator run.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ExperimentConfig>,
    pub protocol: String,
    #[serde(rename = "S")]
    pub nodes: usize,
    pub beacons: usize,
    #[serde(rename = "L")]
    pub accuracy: f64,
    #[serde(rename = "C")]
    pub detected: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rr3p_size: Option<usize>,
    #[serde(rename = "P")]
    pub rounds: usize,
    pub converged: bool,
    pub broadcasts: usize,
    pub control_messages: usize,
    #[serde(rename = "T")]
    pub seconds_per_round: f64,
    pub energy_units: f64,
    /// Nodes claimed localizable that the oracle rejects.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<NodeId>,
    pub final_states: Vec<LocState>,
}

impl RunReport {
    pub fn new<T: Scalar>(
        source: impl Into<String>,
        net: &NetworkGraph<T>,
        trace: &RunTrace,
        oracle: Option<&LocalizabilitySet>,
        seconds_per_round: f64,
    ) -> Self {
        let detected = detected_count(trace);
        let rounds = convergence_round(trace);
        Self {
            source: source.into(),
            config: None,
            protocol: trace.protocol.clone(),
            nodes: net.node_count(),
            beacons: net.beacon_count(),
            accuracy: detected as f64 / net.node_count() as f64,
            detected,
            rr3p_size: oracle.map(|o| o.len()),
            rounds,
            converged: trace.converged,
            broadcasts: trace.total_broadcasts(),
            control_messages: trace.control_per_node.iter().sum(),
            seconds_per_round,
            energy_units: energy_joules(rounds, seconds_per_round),
            violations: oracle.map(|o| o.violations(&trace.localizable())).unwrap_or_default(),
            final_states: trace.final_states.clone(),
        }
    }

    pub fn with_config(mut self, config: ExperimentConfig) -> Self {
        self.config = Some(config);
        self
    }

    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}
