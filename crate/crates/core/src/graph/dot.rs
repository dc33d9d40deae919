use std::fmt::Write;

use super::{Graph, NodeId};

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` as an undirected DOT graph labeled by external ids. Nodes in
/// `highlights` are filled red.
pub fn export_dot(g: &Graph, highlights: &[NodeId]) -> String {
    let mut marked = vec![false; g.node_count()];
    for &v in highlights {
        if v < marked.len() {
            marked[v] = true;
        }
    }
    let mut out = String::from("graph {\n");
    for v in 0..g.node_count() {
        let id = quote(g.external_id(v));
        if marked[v] {
            writeln!(out, "  {id} [style=filled, fillcolor=red];").unwrap();
        } else {
            writeln!(out, "  {id};").unwrap();
        }
    }
    for (a, b) in g.edges() {
        writeln!(out, "  {} -- {};", quote(g.external_id(a)), quote(g.external_id(b))).unwrap();
    }
    out.push_str("}\n");
    out
}
