use std::time::Instant;

use super::{Algorithm, ImmunizationResult};
use crate::graph::{Graph, NodeId};

/// The `k` highest-degree nodes outside `exclude`, ordered by degree
/// descending then index ascending. Out-of-range exclusions are ignored.
pub fn highest_degree(g: &Graph, k: usize, exclude: &[NodeId]) -> ImmunizationResult {
    let started = Instant::now();
    let mut skip = vec![false; g.node_count()];
    for &v in exclude {
        if v < skip.len() {
            skip[v] = true;
        }
    }
    let mut ranked: Vec<(usize, NodeId)> = (0..g.node_count())
        .filter(|&v| !skip[v])
        .map(|v| (g.neighbors(v).len(), v))
        .collect();
    let take = k.min(ranked.len());
    let by_rank = |a: &(usize, NodeId), b: &(usize, NodeId)| b.0.cmp(&a.0).then(a.1.cmp(&b.1));
    if take < ranked.len() && take > 0 {
        ranked.select_nth_unstable_by(take - 1, by_rank);
    }
    ranked.truncate(take);
    ranked.sort_unstable_by(by_rank);
    let picks = ranked.into_iter().map(|(d, v)| (v, d as f64)).collect();
    ImmunizationResult::new(Algorithm::HighestDegree, k, started, picks)
}
