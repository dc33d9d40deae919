//! Seeded synthetic graphs standing in for real interaction networks.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::graph::{Graph, NodeId};

/// Outbreak source of every `CaterpillarLocalSpread` graph.
pub const CATERPILLAR_SOURCE: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphModel {
    /// `param` = edges per new node `m`. Starts from a complete core on
    /// `m + 1` nodes (a triangle for `m = 2`), then every later node links to
    /// `m` distinct existing nodes chosen proportionally to degree, for
    /// `m (m + 1) / 2 + m (n - m - 1)` edges in total.
    PreferentialAttachment,
    /// `param` = independent edge probability.
    RandomUniform,
    /// `param` = maximum chain length `L`. Node 0 is the source; 3 to 5 hubs
    /// hang off it, each carrying a caterpillar (a chain of `L/2..=L` nodes,
    /// some with a pendant leaf). Leftover nodes form a dense, well-connected
    /// core bridged to one chain node, where the highest degrees live.
    CaterpillarLocalSpread,
}

impl GraphModel {
    pub fn name(self) -> &'static str {
        match self {
            GraphModel::PreferentialAttachment => "preferential-attachment",
            GraphModel::RandomUniform => "random-uniform",
            GraphModel::CaterpillarLocalSpread => "caterpillar-local-spread",
        }
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preferential-attachment" | "pa" => Ok(GraphModel::PreferentialAttachment),
            "random-uniform" | "gnp" => Ok(GraphModel::RandomUniform),
            "caterpillar-local-spread" | "caterpillar" => Ok(GraphModel::CaterpillarLocalSpread),
            _ => Err(format!("unknown graph model {s:?}")),
        }
    }
}

fn positive_integer(param: f64, what: &str) -> Result<usize, BenchError> {
    if param >= 1.0 && param.fract() == 0.0 && param.is_finite() {
        Ok(param as usize)
    } else {
        Err(BenchError::InvalidParam(format!("{what} must be a positive integer, got {param}")))
    }
}

pub fn generate_graph(model: GraphModel, n: usize, param: f64, seed: u64) -> Result<Graph, BenchError> {
    if n < 2 {
        return Err(BenchError::InvalidParam(format!("n must be at least 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match model {
        GraphModel::PreferentialAttachment => {
            let m = positive_integer(param, "attachment count")?;
            if n < m + 1 {
                return Err(BenchError::InvalidParam(format!("n must exceed attachment count {m}")));
            }
            preferential_attachment(n, m, &mut rng)
        }
        GraphModel::RandomUniform => {
            if !(0.0..=1.0).contains(&param) {
                return Err(BenchError::InvalidParam(format!("edge probability {param} outside [0, 1]")));
            }
            random_uniform(0, n, param, &mut rng)
        }
        GraphModel::CaterpillarLocalSpread => {
            let len = positive_integer(param, "chain length")?;
            caterpillar(n, len, &mut rng)
        }
    };
    Ok(Graph::from_edges(n, &edges)?)
}

fn preferential_attachment(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::with_capacity(m * n);
    let mut ends = Vec::with_capacity(2 * m * n);
    for a in 0..=m {
        for b in a + 1..=m {
            edges.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut targets = HashSet::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            targets.insert(ends[rng.random_range(0..ends.len())]);
        }
        let mut picked: Vec<_> = targets.iter().copied().collect();
        picked.sort_unstable();
        for t in picked {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    edges
}

/// G(n, p) over the node range `first..first + count`.
fn random_uniform(first: usize, count: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    for a in first..first + count {
        for b in a + 1..first + count {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    edges
}

fn caterpillar(n: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    let mut next = 1;
    let mut chain_nodes = Vec::new();
    let hubs = rng.random_range(3..=5);
    for _ in 0..hubs {
        if next >= n {
            break;
        }
        let hub = next;
        next += 1;
        edges.push((CATERPILLAR_SOURCE, hub));
        let len = rng.random_range(max_len.div_ceil(2)..=max_len);
        let mut prev = hub;
        for _ in 0..len {
            if next >= n {
                break;
            }
            let spine = next;
            next += 1;
            edges.push((prev, spine));
            chain_nodes.push(spine);
            prev = spine;
            if next < n && rng.random_bool(0.3) {
                edges.push((spine, next));
                next += 1;
            }
        }
    }
    let core = n - next;
    if core > 0 {
        let first = next;
        let p = (8.0 / core as f64).min(1.0);
        edges.extend(random_uniform(first, core, p, rng));
        // A ring keeps the core free of cut vertices.
        if core >= 3 {
            edges.extend((0..core).map(|i| (first + i, first + (i + 1) % core)));
        } else if core == 2 {
            edges.push((first, first + 1));
        }
        let anchor = if chain_nodes.is_empty() { CATERPILLAR_SOURCE } else { chain_nodes[rng.random_range(0..chain_nodes.len())] };
        edges.push((anchor, first + rng.random_range(0..core)));
    }
    edges
}

/// `count` distinct nodes drawn uniformly, sorted.
pub fn sample_seeds(g: &Graph, count: usize, seed: u64) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, g.node_count(), count.min(g.node_count())).into_vec();
    picked.sort_unstable();
    picked
}
