//! Undirected simple graph of users and their interactions.
//!
//! Nodes are dense indices in `0..node_count`, assigned in first-appearance
//! order, with a bijection to the external ids found in the input. Adjacency
//! is stored in compressed sparse row form; each neighbor list is strictly
//! increasing and the structure is symmetric.

mod dot;
mod io;
mod seeds;
mod subgraph;

use std::collections::HashMap;

use thiserror::Error;

pub use dot::export_dot;
pub use io::{load_edge_list, read_edge_list_file, write_edge_list, EdgeListOptions};
pub use seeds::SeedSet;
pub use subgraph::{hop_distances, influence_subgraph};

/// Dense node index.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty graph")]
    Empty,
    #[error("node index {node} out of range (node_count = {node_count})")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    dropped_self_loops: usize,
    collapsed_duplicates: usize,
}

impl Graph {
    /// Graph over `0..n` whose external ids are the decimal indices.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut builder = GraphBuilder::new();
        for v in 0..n {
            builder.intern(&v.to_string());
        }
        for &(a, b) in edges {
            for node in [a, b] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, node_count: n });
                }
            }
            builder.add_edge_indices(a, b);
        }
        Ok(builder.build())
    }

    /// Graph with no nodes. Only reachable through `influence_subgraph`; the
    /// edge-list loader rejects empty input.
    pub fn empty() -> Self {
        GraphBuilder::new().build()
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn collapsed_duplicates(&self) -> usize {
        self.collapsed_duplicates
    }

    /// Sorted neighbor list of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Compressed sparse row arrays: neighbors of `v` are
    /// `targets[offsets[v]..offsets[v + 1]]`.
    pub fn csr(&self) -> (&[usize], &[NodeId]) {
        (&self.offsets, &self.targets)
    }

    pub fn degree(&self, v: NodeId) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.neighbors(v).len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.neighbors(v).len())
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.node_count() && self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Each undirected edge once, as `(low, high)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .copied()
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    pub fn external_id(&self, v: NodeId) -> &str {
        &self.ids[v]
    }

    pub fn external_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                node: v,
                node_count: self.node_count(),
            })
        }
    }

    /// Boolean membership mask over all nodes. Fails on any out-of-range index.
    pub fn mask(&self, nodes: &[NodeId]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.node_count()];
        for &v in nodes {
            self.check(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Subgraph induced by `nodes`, keeping external ids. New indices follow
    /// ascending original index order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<Graph, GraphError> {
        let keep = self.mask(nodes)?;
        let mut builder = GraphBuilder::new();
        let mut remap = vec![usize::MAX; self.node_count()];
        for v in (0..self.node_count()).filter(|&v| keep[v]) {
            remap[v] = builder.intern(&self.ids[v]);
        }
        for (a, b) in self.edges() {
            if keep[a] && keep[b] {
                builder.add_edge_indices(remap[a], remap[b]);
            }
        }
        Ok(builder.build())
    }

    /// Copy with every edge touching a node in `removed` deleted. Node indices
    /// and ids are unchanged; removed nodes become isolated.
    pub fn without_nodes(&self, removed: &[NodeId]) -> Result<Graph, GraphError> {
        let gone = self.mask(removed)?;
        let mut builder = GraphBuilder::new();
        for id in &self.ids {
            builder.intern(id);
        }
        for (a, b) in self.edges() {
            if !gone[a] && !gone[b] {
                builder.add_edge_indices(a, b);
            }
        }
        Ok(builder.build())
    }
}

/// Accumulates ids and raw edges, then canonicalizes into a [`Graph`].
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    dropped_self_loops: usize,
}

impl GraphBuilder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn intern(&mut self, id: &str) -> NodeId {
        if let Some(&v) = self.index.get(id) {
            return v;
        }
        let v = self.ids.len();
        self.ids.push(id.to_owned());
        self.index.insert(id.to_owned(), v);
        v
    }

    pub(crate) fn add_edge_ids(&mut self, a: &str, b: &str) {
        let a = self.intern(a);
        let b = self.intern(b);
        self.add_edge_indices(a, b);
    }

    pub(crate) fn add_edge_indices(&mut self, a: NodeId, b: NodeId) {
        if a == b {
            self.dropped_self_loops += 1;
        } else {
            self.edges.push((a.min(b), a.max(b)));
        }
    }

    pub(crate) fn build(mut self) -> Graph {
        let raw = self.edges.len();
        self.edges.sort_unstable();
        self.edges.dedup();
        let collapsed_duplicates = raw - self.edges.len();

        let n = self.ids.len();
        let mut degree = vec![0usize; n];
        for &(a, b) in &self.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        // Sorted (low, high) pairs fill every list in increasing order: a
        // node's lower neighbors arrive as `b` before its higher ones as `a`.
        for &(a, b) in &self.edges {
            targets[cursor[b]] = a;
            cursor[b] += 1;
        }
        for &(a, b) in &self.edges {
            targets[cursor[a]] = b;
            cursor[a] += 1;
        }
        Graph {
            offsets,
            targets,
            ids: self.ids,
            index: self.index,
            dropped_self_loops: self.dropped_self_loops,
            collapsed_duplicates,
        }
    }
}
