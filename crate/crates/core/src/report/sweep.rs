use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detected_count;
use crate::error::{Error, Result};
use crate::netgen::{generate, ExperimentConfig};
use crate::protocols::{run_default, Protocol};

/// One B x N grid of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub protocol: Protocol,
    #[serde(rename = "S")]
    pub nodes: usize,
    pub b_values: Vec<f64>,
    pub n_values: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    /// B from 0.01 to 0.20, N from 2.0 to 5.8, 400 nodes, seeds 0..30.
    pub fn full(protocol: Protocol) -> Self {
        Self {
            protocol,
            nodes: 400,
            b_values: (1..=20).map(|i| i as f64 / 100.0).collect(),
            n_values: (0..20).map(|i| (20 + 2 * i) as f64 / 10.0).collect(),
            seeds: (0..30).collect(),
        }
    }

    fn config(&self, b: f64, n: f64, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(self.nodes, n, b, seed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub runs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stat {
    Mean,
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: SweepSpec,
    /// Row-major: all N values for the first B, then the next B.
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn cell(&self, b: f64, n: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| (c.b - b).abs() < 1e-9 && (c.n - n).abs() < 1e-9)
    }

    /// One row per B, one column per N.
    pub fn to_csv(&self, stat: Stat) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["B\\N".to_string()];
        header.extend(self.spec.n_values.iter().map(|n| format!("{n:.1}")));
        w.write_record(&header)?;
        for (row, b) in self.spec.b_values.iter().enumerate() {
            let width = self.spec.n_values.len();
            let mut record = vec![format!("{b:.2}")];
            for c in &self.cells[row * width..(row + 1) * width] {
                let v = match stat {
                    Stat::Mean => c.mean,
                    Stat::Min => c.min,
                    Stat::Max => c.max,
                };
                record.push(format!("{v:.3}"));
            }
            w.write_record(&record)?;
        }
        finish(w)
    }

    /// One line per cell with mean, min and max.
    pub fn to_long_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.cells {
            w.serialize(c)?;
        }
        finish(w)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs every (B, N, seed) combination in parallel and aggregates the
/// detection accuracy per cell.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let jobs: Vec<(usize, f64, f64, u64)> = spec
        .b_values
        .iter()
        .flat_map(|&b| spec.n_values.iter().map(move |&n| (b, n)))
        .enumerate()
        .flat_map(|(cell, (b, n))| spec.seeds.iter().map(move |&s| (cell, b, n, s)))
        .collect();
    let results: Vec<(usize, f64)> = jobs
        .par_iter()
        .map(|&(cell, b, n, seed)| {
            let net = generate::<f64>(&spec.config(b, n, seed))?;
            let trace = run_default(&net, spec.protocol)?;
            Ok((cell, detected_count(&trace) as f64 / net.node_count() as f64))
        })
        .collect::<Result<_>>()?;
    let mut cells: Vec<SweepCell> = spec
        .b_values
        .iter()
        .flat_map(|&b| {
            spec.n_values.iter().map(move |&n| SweepCell {
                b,
                n,
                mean: 0.0,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
                runs: 0,
            })
        })
        .collect();
    // Sequential, in job order, so the float sums are reproducible.
    for (cell, l) in results {
        let c = &mut cells[cell];
        c.mean += l;
        c.min = c.min.min(l);
        c.max = c.max.max(l);
        c.runs += 1;
    }
    for c in &mut cells {
        if c.runs > 0 {
            c.mean /= c.runs as f64;
        } else {
            c.min = 0.0;
            c.max = 0.0;
        }
    }
    Ok(SweepTable {
        spec: spec.clone(),
        cells,
    })
}
