use std::collections::BTreeMap;

use super::{Graph, GraphError, NodeId};

/// Toxic source nodes flagged by the upstream detector.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    members: Vec<NodeId>,
    scores: Option<BTreeMap<NodeId, f64>>,
    threshold: f64,
}

impl SeedSet {
    /// Unscored seed set; members are sorted and deduplicated.
    pub fn new(g: &Graph, members: impl IntoIterator<Item = NodeId>) -> Result<Self, GraphError> {
        let mut members: Vec<NodeId> = members.into_iter().collect();
        for &v in &members {
            g.check(v)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self {
            members,
            scores: None,
            threshold: 0.0,
        })
    }

    /// Keeps every scored node whose score is at least `threshold`.
    pub fn from_scores(
        g: &Graph,
        scores: impl IntoIterator<Item = (NodeId, f64)>,
        threshold: f64,
    ) -> Result<Self, GraphError> {
        let mut kept = BTreeMap::new();
        for (v, s) in scores {
            g.check(v)?;
            if s >= threshold {
                kept.insert(v, s);
            }
        }
        Ok(Self {
            members: kept.keys().copied().collect(),
            scores: Some(kept),
            threshold,
        })
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn score(&self, v: NodeId) -> Option<f64> {
        self.scores.as_ref()?.get(&v).copied()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}
