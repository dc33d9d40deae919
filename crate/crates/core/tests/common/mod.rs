//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use immunet::{Graph, NodeId};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Largest eigenvalue of the dense adjacency matrix, with the nodes in
/// `deleted` removed.
pub fn dense_lambda(g: &Graph, deleted: &[NodeId]) -> f64 {
    let n = g.node_count();
    let keep: Vec<NodeId> = (0..n).filter(|v| !deleted.contains(v)).collect();
    if keep.is_empty() {
        return 0.0;
    }
    let m = DMatrix::from_fn(keep.len(), keep.len(), |i, j| if g.has_edge(keep[i], keep[j]) { 1.0 } else { 0.0 });
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Random spanning tree plus independent extra edges with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn distinct_nodes(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<NodeId> {
    let mut picked = rand::seq::index::sample(rng, n, count.min(n)).into_vec();
    picked.sort_unstable();
    picked
}

/// BFS from the seed set avoiding `blocked`; seeds themselves always count.
pub fn bfs_reach(g: &Graph, seeds: &[NodeId], blocked: &[NodeId]) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in seeds {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if !seen[u] && !blocked.contains(&u) {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Immediate dominators by deletion: `w` dominates `v` iff removing `w`
/// disconnects `v` from the seeds. `None` for seeds and unreachable nodes,
/// `Some(None)` when the merged seed root is the immediate dominator.
pub fn removal_idoms(g: &Graph, seeds: &[NodeId]) -> Vec<Option<Option<NodeId>>> {
    let n = g.node_count();
    let reach = bfs_reach(g, seeds, &[]);
    let mut strict: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for w in (0..n).filter(|w| reach[*w] && !seeds.contains(w)) {
        let without = bfs_reach(g, seeds, &[w]);
        for v in 0..n {
            if v != w && reach[v] && !without[v] && !seeds.contains(&v) {
                strict[v].push(w);
            }
        }
    }
    (0..n)
        .map(|v| {
            if !reach[v] || seeds.contains(&v) {
                return None;
            }
            // The closest strict dominator is the one dominated by all the others.
            let idom = strict[v].iter().copied().find(|&d| strict[d].len() == strict[v].len() - 1);
            Some(idom)
        })
        .collect()
}
