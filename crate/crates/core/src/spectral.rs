//! Dominant eigenpair of the adjacency matrix by power iteration.
//!
//! The iteration runs on `A + shift * I` so that bipartite graphs (star, path),
//! whose spectrum is symmetric around zero, still have a unique dominant
//! eigenvalue. Convergence is judged on the unshifted residual
//! `||A u - lambda u||`, with `lambda` the Rayleigh quotient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::{fill_chunks, ExecMode};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    /// Unit 2-norm eigenvector, sign chosen so its entries sum nonnegative.
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("cannot compute eigenpair of an empty graph")]
    EmptyGraph,
    #[error("invalid power iteration config: {0}")]
    InvalidConfig(&'static str),
    #[error("power iteration did not converge in {max_iter} iterations (best residual {})", best.residual)]
    NotConverged { max_iter: usize, best: Box<EigenPair> },
}

#[derive(Debug, Clone, Copy)]
pub struct PowerIterationConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Only used to draw a fresh start vector if the iterate collapses.
    pub rng_seed: u64,
    pub shift: f64,
    pub mode: ExecMode,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            rng_seed: 0,
            shift: 1.0,
            mode: ExecMode::default(),
        }
    }
}

/// `y = A x`. Each row sums its neighbors in adjacency order, so the result
/// does not depend on the execution mode.
pub fn adjacency_matvec(g: &Graph, x: &[f64], y: &mut [f64], mode: ExecMode) {
    let (offsets, targets) = g.csr();
    fill_chunks(mode, y, |start, chunk| {
        let rows = &offsets[start..=start + chunk.len()];
        for (slot, bounds) in chunk.iter_mut().zip(rows.windows(2)) {
            let mut sum = 0.0;
            for &j in &targets[bounds[0]..bounds[1]] {
                sum += x[j];
            }
            *slot = sum;
        }
    });
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn power_iteration(g: &Graph, config: &PowerIterationConfig) -> Result<EigenPair, SpectralError> {
    let n = g.node_count();
    if n == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    if !(config.tol > 0.0) {
        return Err(SpectralError::InvalidConfig("tol must be positive"));
    }
    if config.max_iter == 0 {
        return Err(SpectralError::InvalidConfig("max_iter must be at least 1"));
    }
    if !(config.shift > 0.0) {
        return Err(SpectralError::InvalidConfig("shift must be positive"));
    }

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut rng: Option<ChaCha8Rng> = None;
    let mut best_u = vec![0.0; n];
    let mut best: Option<(f64, f64, usize)> = None;

    for iteration in 1..=config.max_iter {
        adjacency_matvec(g, &x, &mut y, config.mode);
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - lambda * xi).powi(2))
            .sum::<f64>()
            .sqrt();

        if residual <= config.tol {
            return Ok(finish(x, lambda, residual, iteration));
        }
        if best.is_none_or(|(_, r, _)| residual < r) {
            best_u.copy_from_slice(&x);
            best = Some((lambda, residual, iteration));
        }

        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi + config.shift * *xi;
        }
        let len = norm(&x);
        if len < 1e-300 || !len.is_finite() {
            let rng = rng.get_or_insert_with(|| ChaCha8Rng::seed_from_u64(config.rng_seed));
            x.iter_mut().for_each(|v| *v = rng.random_range(0.5..1.0));
            let len = norm(&x);
            x.iter_mut().for_each(|v| *v /= len);
        } else {
            x.iter_mut().for_each(|v| *v /= len);
        }
    }

    let (lambda, residual, iterations) = best.expect("at least one iteration ran");
    Err(SpectralError::NotConverged {
        max_iter: config.max_iter,
        best: Box::new(finish(best_u, lambda, residual, iterations)),
    })
}

fn finish(mut u: Vec<f64>, lambda: f64, residual: f64, iterations: usize) -> EigenPair {
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    EigenPair { lambda, u, residual, iterations }
}
