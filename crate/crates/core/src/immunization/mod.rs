//! Budgeted node-selection strategies.
//!
//! * [`highest_degree`]: the top-k nodes by degree.
//! * [`netshield`]: greedy maximization of the shield value, a spectral
//!   estimate of the eigen-drop caused by deleting the selected nodes.
//! * [`dava`]: seed-aware selection on the dominator tree rooted at the merged
//!   toxic seeds; blocking a node saves every node it dominates.
//!
//! All tie-breaks go to the lowest node index.

mod dava;
mod degree;
mod dominator;
mod netshield;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{hop_distances, Graph, GraphError, NodeId, SeedSet};
use crate::spectral::{PowerIterationConfig, SpectralError};

pub use dava::{dava, DavaVariant};
pub use degree::highest_degree;
pub use dominator::{build_dominator_tree, DominatorTree};
pub use netshield::{netshield, netshield_with_eigen, shield_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    HighestDegree,
    NetShield,
    #[serde(rename = "DAVA")]
    Dava,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::HighestDegree, Algorithm::NetShield, Algorithm::Dava];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::HighestDegree => "HighestDegree",
            Algorithm::NetShield => "NetShield",
            Algorithm::Dava => "DAVA",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "highestdegree" | "highest-degree" | "degree" | "hd" => Ok(Algorithm::HighestDegree),
            "netshield" | "net-shield" | "ns" => Ok(Algorithm::NetShield),
            "dava" => Ok(Algorithm::Dava),
            _ => Err(format!("unknown algorithm {s:?} (expected highest-degree, netshield or dava)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ImmunizationError {
    #[error("DAVA requires seed nodes")]
    NoSeeds,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImmunizationResult {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Blocked nodes in selection order.
    pub selected: Vec<NodeId>,
    /// Score of each selected node at the time it was picked: its degree,
    /// its marginal shield-value gain, or its dominator benefit.
    pub node_scores: Vec<f64>,
    pub elapsed_seconds: f64,
}

impl ImmunizationResult {
    pub(crate) fn new(algorithm: Algorithm, k: usize, started: Instant, picks: Vec<(NodeId, f64)>) -> Self {
        let (selected, node_scores) = picks.into_iter().unzip();
        Self {
            algorithm,
            k,
            selected,
            node_scores,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn score_of(&self, v: NodeId) -> Option<f64> {
        self.selected.iter().position(|&s| s == v).map(|i| self.node_scores[i])
    }
}

/// Which part of the graph the seed-agnostic strategies look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[default]
    Full,
    /// The connected components that contain at least one seed.
    Subgraph,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Scope::Full),
            "subgraph" => Ok(Scope::Subgraph),
            _ => Err(format!("unknown scope {s:?} (expected full or subgraph)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ImmunizeOptions {
    pub scope: Scope,
    pub dava_variant: DavaVariant,
    pub power: PowerIterationConfig,
}

/// Runs `algorithm` with budget `k`, never selecting a seed. DAVA needs a
/// nonempty seed set; the other strategies accept `None`.
pub fn immunize(
    g: &Graph,
    seeds: Option<&SeedSet>,
    algorithm: Algorithm,
    k: usize,
    options: &ImmunizeOptions,
) -> Result<ImmunizationResult, ImmunizationError> {
    if algorithm == Algorithm::Dava {
        let seeds = seeds.ok_or(ImmunizationError::NoSeeds)?;
        return dava(g, seeds, k, options.dava_variant);
    }
    let exclude = seeds.map(SeedSet::members).unwrap_or(&[]);
    let run = |g: &Graph, exclude: &[NodeId]| match algorithm {
        Algorithm::HighestDegree => Ok(highest_degree(g, k, exclude)),
        _ => netshield(g, k, exclude, &options.power),
    };
    match (options.scope, seeds) {
        (Scope::Subgraph, Some(seeds)) => {
            let started = Instant::now();
            let dist = hop_distances(g, seeds.members(), usize::MAX)?;
            let keep: Vec<NodeId> = (0..g.node_count()).filter(|&v| dist[v].is_some()).collect();
            if keep.is_empty() {
                return Ok(ImmunizationResult::new(algorithm, k, started, Vec::new()));
            }
            let sub = g.induced_subgraph(&keep)?;
            let local_exclude: Vec<NodeId> = exclude
                .iter()
                .filter_map(|&s| keep.binary_search(&s).ok())
                .collect();
            let mut result = run(&sub, &local_exclude)?;
            result.selected.iter_mut().for_each(|v| *v = keep[*v]);
            result.elapsed_seconds = started.elapsed().as_secs_f64();
            Ok(result)
        }
        _ => run(g, exclude),
    }
}

/// First maximum of `candidates`, which must arrive in increasing index order.
pub(crate) fn argmax_lowest<I>(candidates: I) -> Option<(NodeId, f64)>
where
    I: IntoIterator<Item = (NodeId, f64)>,
{
    let mut best: Option<(NodeId, f64)> = None;
    for (v, s) in candidates {
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((v, s)),
        }
    }
    best
}
