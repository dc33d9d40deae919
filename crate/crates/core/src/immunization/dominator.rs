//! Dominator tree of the graph seen from its toxic seeds.
//!
//! All seeds are merged into one virtual root whose arcs are the union of the
//! seeds' edges; seed-seed edges disappear. Every undirected edge between
//! non-seed nodes is a pair of opposite arcs. Immediate dominators come from
//! the iterative intersection data-flow algorithm run over a BFS ordering
//! from the root: a dominator of `v` lies on every shortest path to `v`, so
//! it is always discovered before `v`.

use std::collections::VecDeque;

use super::ImmunizationError;
use crate::graph::{Graph, NodeId, SeedSet};

const UNSEEN: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatorTree {
    root: usize,
    /// Indexed by node, plus one trailing slot for the root.
    idom: Vec<usize>,
    bfs_pos: Vec<usize>,
    subtree_size: Vec<usize>,
    order: Vec<usize>,
}

impl DominatorTree {
    /// Id of the virtual seed supernode, equal to the graph's node count.
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_reachable(&self, v: usize) -> bool {
        self.bfs_pos.get(v).is_some_and(|&p| p != UNSEEN)
    }

    /// Immediate dominator of `v`. `None` for the root, for seeds (folded
    /// into the root) and for nodes the root cannot reach.
    pub fn idom(&self, v: NodeId) -> Option<usize> {
        if v == self.root || !self.is_reachable(v) {
            None
        } else {
            Some(self.idom[v])
        }
    }

    /// Nodes dominated by `v`, itself included. Zero when unreachable.
    pub fn subtree_size(&self, v: usize) -> usize {
        self.subtree_size.get(v).copied().unwrap_or(0)
    }

    /// Root followed by every reachable non-seed node in BFS order.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn root_children(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.order[1..].iter().copied().filter(|&v| self.idom[v] == self.root)
    }

    /// Whether `w` dominates `v` (reflexive).
    pub fn dominates(&self, w: usize, v: usize) -> bool {
        if !self.is_reachable(w) || !self.is_reachable(v) {
            return false;
        }
        let mut x = v;
        loop {
            if x == w {
                return true;
            }
            if x == self.root {
                return false;
            }
            x = self.idom[x];
        }
    }
}

pub fn build_dominator_tree(g: &Graph, seeds: &SeedSet) -> Result<DominatorTree, ImmunizationError> {
    if seeds.is_empty() {
        return Err(ImmunizationError::NoSeeds);
    }
    let seed_mask = g.mask(seeds.members())?;
    Ok(build_masked(g, &seed_mask, &vec![false; g.node_count()]))
}

/// Dominator tree of `g` with `removed` nodes deleted.
pub(crate) fn build_masked(g: &Graph, seed: &[bool], removed: &[bool]) -> DominatorTree {
    let n = g.node_count();
    let root = n;
    let mut bfs_pos = vec![UNSEEN; n + 1];
    let mut order = Vec::with_capacity(n + 1);
    bfs_pos[root] = 0;
    order.push(root);

    let mut queue = VecDeque::new();
    let mut visit = |u: usize, order: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
        if !seed[u] && !removed[u] && bfs_pos[u] == UNSEEN {
            bfs_pos[u] = order.len();
            order.push(u);
            queue.push_back(u);
        }
    };
    for s in (0..n).filter(|&s| seed[s]) {
        for &u in g.neighbors(s) {
            visit(u, &mut order, &mut queue);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            visit(u, &mut order, &mut queue);
        }
    }

    let mut idom = vec![UNSEEN; n + 1];
    idom[root] = root;
    let intersect = |idom: &[usize], mut a: usize, mut b: usize| {
        while a != b {
            while bfs_pos[a] > bfs_pos[b] {
                a = idom[a];
            }
            while bfs_pos[b] > bfs_pos[a] {
                b = idom[b];
            }
        }
        a
    };

    let mut changed = true;
    while changed {
        changed = false;
        for &v in &order[1..] {
            let mut candidate = UNSEEN;
            for &p in g.neighbors(v) {
                let p = if seed[p] { root } else { p };
                if removed.get(p).copied().unwrap_or(false) || bfs_pos[p] == UNSEEN || idom[p] == UNSEEN {
                    continue;
                }
                candidate = if candidate == UNSEEN { p } else { intersect(&idom, p, candidate) };
            }
            if idom[v] != candidate {
                idom[v] = candidate;
                changed = true;
            }
        }
    }

    let mut subtree_size = vec![0; n + 1];
    for &v in &order {
        subtree_size[v] = 1;
    }
    for &v in order[1..].iter().rev() {
        subtree_size[idom[v]] += subtree_size[v];
    }

    DominatorTree { root, idom, bfs_pos, subtree_size, order }
}
