//! Independent-cascade Monte-Carlo simulation and saved-node evaluation.
//!
//! Every run draws its edge coins from a counter-based hash of
//! `(run key, undirected edge)`, so a given edge is live or dead in run `r` no
//! matter which endpoint tries to cross it, when, or which other nodes are
//! blocked. Blocked and unblocked simulations with the same `master_seed`
//! therefore share random numbers exactly, and blocking can only shrink each
//! run's infected set.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_indexed, ExecMode};
use crate::graph::{Graph, GraphError, NodeId, SeedSet};
use crate::immunization::Algorithm;

/// Runs per parallel work item.
const RUN_CHUNK: usize = 32;

#[derive(Debug, Error)]
pub enum SpreadError {
    #[error("seed nodes cannot be blocked: {0:?}")]
    SeedBlocked(Vec<NodeId>),
    #[error("invalid cascade parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeParams {
    pub p: f64,
    pub runs: usize,
    pub master_seed: u64,
}

impl Default for CascadeParams {
    fn default() -> Self {
        Self { p: 0.1, runs: 1000, master_seed: 0 }
    }
}

impl CascadeParams {
    pub fn validate(&self) -> Result<(), SpreadError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SpreadError::InvalidParams("p must lie in [0, 1]"));
        }
        if self.runs == 0 {
            return Err(SpreadError::InvalidParams("runs must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadOutcome {
    pub runs: usize,
    pub mean_infected: f64,
    pub per_node_frequency: Vec<f64>,
    pub per_run_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedReport {
    pub algorithm: Option<Algorithm>,
    pub k: usize,
    pub baseline_mean: f64,
    pub blocked_mean: f64,
    pub saved: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key of run `run` under `master_seed`.
pub fn run_key(master_seed: u64, run: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ run.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Coin for the undirected edge `{a, b}` in the run with key `key`.
#[inline]
pub fn edge_is_live(key: u64, a: NodeId, b: NodeId, p: f64) -> bool {
    let (lo, hi) = if a < b { (a as u64, b as u64) } else { (b as u64, a as u64) };
    let h = splitmix64(key ^ splitmix64(lo.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ hi));
    ((h >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
}

/// One cascade. Returns the infected nodes in infection order, seeds first.
pub fn cascade_run(g: &Graph, seeds: &[NodeId], blocked: &[bool], p: f64, key: u64) -> Vec<NodeId> {
    let mut infected = vec![false; g.node_count()];
    let mut order = Vec::new();
    for &s in seeds {
        if !infected[s] {
            infected[s] = true;
            order.push(s);
        }
    }
    let mut queue: VecDeque<NodeId> = order.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if !infected[u] && !blocked[u] && edge_is_live(key, v, u, p) {
                infected[u] = true;
                order.push(u);
                queue.push_back(u);
            }
        }
    }
    order
}

fn checked_block_mask(g: &Graph, seeds: &SeedSet, blocked: &[NodeId]) -> Result<Vec<bool>, SpreadError> {
    for &s in seeds.members() {
        g.check(s)?;
    }
    let mask = g.mask(blocked)?;
    let clash: Vec<NodeId> = seeds.members().iter().copied().filter(|&s| mask[s]).collect();
    if !clash.is_empty() {
        return Err(SpreadError::SeedBlocked(clash));
    }
    Ok(mask)
}

pub fn simulate_ic(g: &Graph, seeds: &SeedSet, blocked: &[NodeId], params: &CascadeParams) -> Result<SpreadOutcome, SpreadError> {
    simulate_ic_with(g, seeds, blocked, params, ExecMode::default())
}

pub fn simulate_ic_with(
    g: &Graph,
    seeds: &SeedSet,
    blocked: &[NodeId],
    params: &CascadeParams,
    mode: ExecMode,
) -> Result<SpreadOutcome, SpreadError> {
    params.validate()?;
    let mask = checked_block_mask(g, seeds, blocked)?;
    let n = g.node_count();
    let chunks = params.runs.div_ceil(RUN_CHUNK);
    let partials = map_indexed(mode, chunks, |c| {
        let mut hits = vec![0u32; n];
        let mut counts = Vec::with_capacity(RUN_CHUNK);
        for run in c * RUN_CHUNK..((c + 1) * RUN_CHUNK).min(params.runs) {
            let infected = cascade_run(g, seeds.members(), &mask, params.p, run_key(params.master_seed, run as u64));
            for &v in &infected {
                hits[v] += 1;
            }
            counts.push(infected.len());
        }
        (hits, counts)
    });

    let mut hits = vec![0u64; n];
    let mut per_run_counts = Vec::with_capacity(params.runs);
    for (chunk_hits, counts) in partials {
        for (total, h) in hits.iter_mut().zip(chunk_hits) {
            *total += u64::from(h);
        }
        per_run_counts.extend(counts);
    }
    let runs = params.runs as f64;
    let total: usize = per_run_counts.iter().sum();
    Ok(SpreadOutcome {
        runs: params.runs,
        mean_infected: total as f64 / runs,
        per_node_frequency: hits.into_iter().map(|h| h as f64 / runs).collect(),
        per_run_counts,
    })
}

/// Nodes reachable from the seeds without passing through `blocked`, sorted.
pub fn reachability(g: &Graph, seeds: &SeedSet, blocked: &[NodeId]) -> Result<Vec<NodeId>, SpreadError> {
    let mask = checked_block_mask(g, seeds, blocked)?;
    let mut seen = vec![false; g.node_count()];
    let mut stack: Vec<NodeId> = seeds.members().to_vec();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !seen[u] && !mask[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    Ok((0..g.node_count()).filter(|&v| seen[v]).collect())
}

/// Mean infections without blocking minus mean infections with `blocked`
/// removed, both sides driven by the same per-run random numbers.
pub fn saved_nodes(g: &Graph, seeds: &SeedSet, blocked: &[NodeId], params: &CascadeParams) -> Result<SavedReport, SpreadError> {
    let blocked_run = simulate_ic(g, seeds, blocked, params)?;
    let baseline = simulate_ic(g, seeds, &[], params)?;
    Ok(SavedReport {
        algorithm: None,
        k: blocked.len(),
        baseline_mean: baseline.mean_infected,
        blocked_mean: blocked_run.mean_infected,
        saved: baseline.mean_infected - blocked_run.mean_infected,
    })
}
