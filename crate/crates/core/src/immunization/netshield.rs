use std::time::Instant;

use super::{Algorithm, ImmunizationError, ImmunizationResult};
use crate::graph::{Graph, NodeId};
use crate::spectral::{power_iteration, EigenPair, PowerIterationConfig};

/// Gains within this relative distance of the maximum count as ties.
const TIE_TOLERANCE: f64 = 1e-12;

/// `Sv(S) = sum_{i in S} 2 lambda u_i^2 - sum_{i,j in S} A_ij u_i u_j`, the
/// double sum running over ordered pairs. Duplicate members count once.
pub fn shield_value(g: &Graph, eigen: &EigenPair, set: &[NodeId]) -> f64 {
    let mut member = vec![false; g.node_count()];
    let mut unique = Vec::with_capacity(set.len());
    for &v in set {
        if !member[v] {
            member[v] = true;
            unique.push(v);
        }
    }
    let u = &eigen.u;
    let diagonal: f64 = unique.iter().map(|&i| 2.0 * eigen.lambda * u[i] * u[i]).sum();
    let coupling: f64 = unique
        .iter()
        .map(|&i| {
            g.neighbors(i)
                .iter()
                .filter(|&&j| member[j])
                .map(|&j| u[i] * u[j])
                .sum::<f64>()
        })
        .sum();
    diagonal - coupling
}

/// Greedy shield-value maximization over a precomputed eigenpair. Each step
/// adds the eligible node with the largest marginal gain
/// `2 lambda u_i^2 - 2 u_i sum_{j in S} A_ij u_j`.
pub fn netshield_with_eigen(g: &Graph, eigen: &EigenPair, k: usize, exclude: &[NodeId]) -> ImmunizationResult {
    let started = Instant::now();
    let n = g.node_count();
    let u = &eigen.u;
    let mut eligible = vec![true; n];
    for &v in exclude {
        if v < n {
            eligible[v] = false;
        }
    }
    let base: Vec<f64> = u.iter().map(|ui| 2.0 * eigen.lambda * ui * ui).collect();
    // coupled[j] = sum over selected i adjacent to j of u_i
    let mut coupled = vec![0.0; n];
    let mut picks = Vec::with_capacity(k.min(n));

    for _ in 0..k {
        let gain = |j: usize| base[j] - 2.0 * u[j] * coupled[j];
        let Some(best) = (0..n)
            .filter(|&j| eligible[j])
            .map(gain)
            .max_by(f64::total_cmp)
        else {
            break;
        };
        let floor = best - TIE_TOLERANCE * best.abs().max(f64::MIN_POSITIVE);
        let pick = (0..n).find(|&j| eligible[j] && gain(j) >= floor).unwrap();
        picks.push((pick, gain(pick)));
        eligible[pick] = false;
        for &j in g.neighbors(pick) {
            coupled[j] += u[pick];
        }
    }
    ImmunizationResult::new(Algorithm::NetShield, k, started, picks)
}

/// NetShield including the eigenpair computation in the reported time.
pub fn netshield(
    g: &Graph,
    k: usize,
    exclude: &[NodeId],
    power: &PowerIterationConfig,
) -> Result<ImmunizationResult, ImmunizationError> {
    let started = Instant::now();
    let eigen = power_iteration(g, power)?;
    let mut result = netshield_with_eigen(g, &eigen, k, exclude);
    result.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(result)
}
