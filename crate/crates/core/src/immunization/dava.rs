use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dominator::build_masked;
use super::{Algorithm, ImmunizationError, ImmunizationResult};
use crate::graph::{Graph, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DavaVariant {
    /// Rebuild the dominator tree after every pick.
    #[default]
    Iterative,
    /// One tree; the top-k children of the root.
    Fast,
}

impl std::str::FromStr for DavaVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iterative" => Ok(DavaVariant::Iterative),
            "fast" => Ok(DavaVariant::Fast),
            _ => Err(format!("unknown DAVA variant {s:?} (expected iterative or fast)")),
        }
    }
}

/// Blocks the nodes that dominate the most of the graph as seen from the
/// seeds. A node's benefit is its dominator-subtree size: with certain
/// transmission, blocking it saves exactly those nodes. Selection stops early
/// once no reachable non-seed node is left.
pub fn dava(g: &Graph, seeds: &SeedSet, k: usize, variant: DavaVariant) -> Result<ImmunizationResult, ImmunizationError> {
    let started = Instant::now();
    if seeds.is_empty() {
        return Err(ImmunizationError::NoSeeds);
    }
    let seed = g.mask(seeds.members())?;
    let mut removed = vec![false; g.node_count()];
    let mut picks = Vec::with_capacity(k);

    match variant {
        DavaVariant::Iterative => {
            for _ in 0..k {
                let tree = build_masked(g, &seed, &removed);
                // Root children dominate their descendants, so the maximum
                // benefit is always found among them.
                let best = super::argmax_lowest(
                    sorted(tree.root_children().collect()).into_iter().map(|v| (v, tree.subtree_size(v) as f64)),
                );
                let Some((v, benefit)) = best else { break };
                picks.push((v, benefit));
                removed[v] = true;
            }
        }
        DavaVariant::Fast => {
            let tree = build_masked(g, &seed, &removed);
            let mut children: Vec<(usize, usize)> =
                tree.root_children().map(|v| (tree.subtree_size(v), v)).collect();
            children.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            picks.extend(children.into_iter().take(k).map(|(size, v)| (v, size as f64)));
        }
    }
    Ok(ImmunizationResult::new(Algorithm::Dava, k, started, picks))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, EdgeListOptions, NodeId};
    use crate::spread::reachability;

    fn setup(text: &str, seeds: &[&str]) -> (Graph, SeedSet) {
        let g = load_edge_list(text.as_bytes(), &EdgeListOptions::default()).unwrap();
        let s = SeedSet::new(&g, seeds.iter().map(|id| g.index_of(id).unwrap())).unwrap();
        (g, s)
    }

    /// Best single block by exhaustive certain-transmission cascades.
    fn brute_force_single(g: &Graph, seeds: &SeedSet) -> Vec<(NodeId, usize)> {
        (0..g.node_count())
            .filter(|&v| !seeds.contains(v))
            .map(|v| (v, reachability(g, seeds, &[v]).unwrap().len()))
            .collect()
    }

    fn ids(g: &Graph, r: &ImmunizationResult) -> Vec<String> {
        r.selected.iter().map(|&v| g.external_id(v).to_owned()).collect()
    }

    #[test]
    fn branch_with_longer_tail_wins() {
        let (g, s) = setup("s a\na c\nc d\ns b\n", &["s"]);
        let oracle = brute_force_single(&g, &s);
        let fewest = oracle.iter().map(|&(_, left)| left).min().unwrap();
        let winners: Vec<_> = oracle.iter().filter(|&&(_, left)| left == fewest).map(|&(v, _)| v).collect();
        assert_eq!(winners, [g.index_of("a").unwrap()]);
        let r = dava(&g, &s, 1, DavaVariant::Iterative).unwrap();
        assert_eq!(ids(&g, &r), ["a"]);
        assert_eq!(r.node_scores, [3.0]);
    }

    #[test]
    fn chain_blocks_first_hop() {
        let (g, s) = setup("s a\na b\nb c\n", &["s"]);
        assert_eq!(ids(&g, &dava(&g, &s, 1, DavaVariant::Iterative).unwrap()), ["a"]);
        assert_eq!(ids(&g, &dava(&g, &s, 1, DavaVariant::Fast).unwrap()), ["a"]);
    }

    #[test]
    fn budget_beyond_reach() {
        let (g, s) = setup("s a\ns b\na c\nb d\nd e\n", &["s"]);
        let r = dava(&g, &s, 5, DavaVariant::Iterative).unwrap();
        assert_eq!(r.selected.len(), 2);
        let mut got = ids(&g, &r);
        got.sort();
        assert_eq!(got, ["a", "b"]);
        // Once both neighbors are blocked the seed reaches nothing else.
        let left = reachability(&g, &s, &r.selected).unwrap();
        assert_eq!(left, s.members());
    }

    #[test]
    fn fast_takes_root_children_by_size() {
        let (g, s) = setup("s a\na b\nb c\ns d\nd e\ns f\n", &["s"]);
        let r = dava(&g, &s, 2, DavaVariant::Fast).unwrap();
        assert_eq!(ids(&g, &r), ["a", "d"]);
        assert_eq!(r.node_scores, [3.0, 2.0]);
    }

    #[test]
    fn never_selects_seeds() {
        let (g, s) = setup("s t\ns a\nt a\na b\n", &["s", "t"]);
        let r = dava(&g, &s, 4, DavaVariant::Iterative).unwrap();
        assert!(r.selected.iter().all(|&v| !s.contains(v)));
    }
}
