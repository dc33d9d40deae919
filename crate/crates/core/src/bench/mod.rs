//! Runtime-versus-budget sweeps and saved-node evaluation per algorithm.

mod generate;

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::{generate_graph, sample_seeds, GraphModel, CATERPILLAR_SOURCE};

use crate::graph::{Graph, GraphError, SeedSet};
use crate::immunization::{immunize, Algorithm, ImmunizeOptions};
use crate::spectral::power_iteration;
use crate::spread::{saved_nodes, CascadeParams, SpreadError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("k list must be nonempty and strictly increasing, got {0:?}")]
    InvalidKList(Vec<usize>),
    #[error("invalid generator parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Spread(#[from] SpreadError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub elapsed_seconds: f64,
    pub saved_nodes: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphMeta {
    pub nodes: usize,
    pub edges: usize,
    pub seeds: usize,
    pub generator: Option<String>,
    pub generator_seed: Option<u64>,
    pub load_seconds: Option<f64>,
    /// One standalone eigenpair computation, for reference. NetShield rows
    /// include their own eigen solve.
    pub eigen_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub graph_meta: GraphMeta,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    /// Timed repetitions per cell; the median is reported.
    pub repetitions: usize,
    pub evaluate_saved: bool,
    pub options: ImmunizeOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { repetitions: 3, evaluate_saved: true, options: ImmunizeOptions::default() }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 { xs[mid] } else { 0.5 * (xs[mid - 1] + xs[mid]) }
}

/// Times every `algorithm x k` cell sequentially, rows ordered by algorithm
/// then k. A failing cell is recorded in its row and the sweep continues.
pub fn run_benchmark(
    g: &Graph,
    seeds: &SeedSet,
    algorithms: &[Algorithm],
    k_list: &[usize],
    params: &CascadeParams,
    config: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    if k_list.is_empty() || k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::InvalidKList(k_list.to_vec()));
    }
    params.validate()?;

    let started = Instant::now();
    let eigen_seconds = power_iteration(g, &config.options.power).ok().map(|_| started.elapsed().as_secs_f64());
    let graph_meta = GraphMeta {
        nodes: g.node_count(),
        edges: g.edge_count(),
        seeds: seeds.len(),
        eigen_seconds,
        ..GraphMeta::default()
    };

    let mut rows = Vec::with_capacity(algorithms.len() * k_list.len());
    for &algorithm in algorithms {
        for &k in k_list {
            rows.push(bench_cell(g, seeds, algorithm, k, params, config));
        }
    }
    Ok(BenchReport { graph_meta, rows })
}

fn bench_cell(g: &Graph, seeds: &SeedSet, algorithm: Algorithm, k: usize, params: &CascadeParams, config: &BenchConfig) -> BenchRow {
    let mut times = Vec::with_capacity(config.repetitions.max(1));
    let mut last = None;
    for _ in 0..config.repetitions.max(1) {
        match immunize(g, Some(seeds), algorithm, k, &config.options) {
            Ok(result) => {
                times.push(result.elapsed_seconds);
                last = Some(result);
            }
            Err(e) => {
                return BenchRow { algorithm, k, elapsed_seconds: 0.0, saved_nodes: None, error: Some(e.to_string()) };
            }
        }
    }
    let result = last.unwrap();
    let mut row = BenchRow { algorithm, k, elapsed_seconds: median(times), saved_nodes: None, error: None };
    if config.evaluate_saved {
        match saved_nodes(g, seeds, &result.selected, params) {
            Ok(report) => row.saved_nodes = Some(report.saved),
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

/// `algorithm,k,elapsed_seconds,saved_nodes`; missing saved counts are empty.
pub fn write_bench_csv<W: Write>(report: &BenchReport, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["algorithm", "k", "elapsed_seconds", "saved_nodes"])?;
    for row in &report.rows {
        w.write_record([
            row.algorithm.name().to_owned(),
            row.k.to_string(),
            row.elapsed_seconds.to_string(),
            row.saved_nodes.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Least-squares line through `(x, y)`: `(slope, intercept, r_squared)`.
/// `r_squared` is 1 when `y` is constant and the line fits exactly.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}
