//! Localizability detection for wireless sensor networks.
//!
//! The crate bundles a combinatorial rigidity kernel, a round-based protocol
//! simulator with four detection protocols, a centralized ground-truth
//! oracle and an experiment harness.

pub mod error;
pub mod graph;
pub mod netgen;
pub mod oracle;
pub mod protocols;
pub mod report;
pub mod rigidity;
pub mod sim;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Position64 = graph::Position<f64>;
pub type Position32 = graph::Position<f32>;
pub type NetworkGraph64 = graph::NetworkGraph<f64>;
pub type NetworkGraph32 = graph::NetworkGraph<f32>;
pub type ConstraintGraph64 = graph::ConstraintGraph<f64>;
pub type ConstraintGraph32 = graph::ConstraintGraph<f32>;
