use std::collections::VecDeque;

use super::{Graph, GraphError, NodeId};

/// Multi-source BFS distances, truncated at `radius` hops. Nodes farther than
/// `radius` (or unreachable) are `None`.
pub fn hop_distances(g: &Graph, sources: &[NodeId], radius: usize) -> Result<Vec<Option<usize>>, GraphError> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        g.check(s)?;
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        if d == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    Ok(dist)
}

/// Subgraph induced by `nodes` and everything within `radius` hops of them.
/// With `radius = 1` this is the selected nodes plus their direct neighbors.
pub fn influence_subgraph(g: &Graph, nodes: &[NodeId], radius: usize) -> Result<Graph, GraphError> {
    if nodes.is_empty() {
        return Ok(Graph::empty());
    }
    let dist = hop_distances(g, nodes, radius)?;
    let keep: Vec<NodeId> = (0..g.node_count()).filter(|&v| dist[v].is_some()).collect();
    g.induced_subgraph(&keep)
}
