//! DOT emission for graphs, violation highlights, and discharge ledgers.

use crate::graph::Graph;
use std::collections::HashSet;
use std::fmt::Write;

/// Plain DOT output, optionally highlighting a set of vertices.
pub fn graph_to_dot(g: &Graph, highlight: &[usize]) -> String {
    let hi: HashSet<usize> = highlight.iter().copied().collect();
    let mut s = String::from("graph {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        if hi.contains(&v) {
            writeln!(s, "  {v} [style=filled, fillcolor=red];").unwrap();
        } else {
            writeln!(s, "  {v};").unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(s, "  {u} -- {v};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// DOT output with per-vertex labels and black/gray edge classes, used by
/// the discharging ledger export.
pub fn labeled_dot(
    g: &Graph,
    vertex_label: impl Fn(usize) -> String,
    edge_is_black: impl Fn(usize, usize) -> bool,
) -> String {
    let mut s = String::from("graph {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        writeln!(s, "  {v} [label=\"{}\"];", vertex_label(v)).unwrap();
    }
    for (u, v) in g.edges() {
        if edge_is_black(u, v) {
            writeln!(s, "  {u} -- {v} [color=black, penwidth=2];").unwrap();
        } else {
            writeln!(s, "  {u} -- {v} [color=gray];").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_contains_edges() {
        let g = Graph::path(3).unwrap();
        let d = graph_to_dot(&g, &[1]);
        assert!(d.contains("0 -- 1"));
        assert!(d.contains("fillcolor=red"));
    }
}
