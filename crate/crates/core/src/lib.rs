//! Budgeted network immunization against harmful-content spread.
//!
//! Users are nodes and interactions are edges. Given the toxic users flagged
//! by an external detector, the crate picks `k` nodes to block with one of
//! three strategies (highest degree, NetShield, DAVA), measures how many
//! users the blocking saves under independent-cascade spread, and times the
//! strategies against the budget.

pub mod bench;
pub mod cli;
pub mod exec;
pub mod graph;
pub mod immunization;
pub mod labels;
pub mod report;
pub mod spectral;
pub mod spread;

pub use exec::ExecMode;
pub use graph::{Graph, GraphError, NodeId, SeedSet};
pub use immunization::{Algorithm, ImmunizationResult};
