//! Phase two: pendant classes, subtree gray totals, distributed weights,
//! and overweights, all exact.
//!
//! Each gray half-edge carries 1/2 = (ell-2) * alpha. A half-edge at a
//! D-vertex v hands alpha to every vertex on the black path from v down to
//! layer one and keeps the remainder at v, which yields
//! wt(v) = (g(T_v) + (ell-2-i) g(v)) * alpha for v in layer i.

use super::DischargeLedger;
use crate::error::Result;
use crate::rat::rat_int;

pub fn compute_weights(ledger: &mut DischargeLedger) -> Result<()> {
    let n = ledger.n();
    let g = ledger.graph.clone();
    let alpha = ledger.params.alpha;
    let ell = ledger.params.ell;

    // Pendant classes.
    for v in 0..n {
        ledger.eps[v] = if g.degree(v) == 1 {
            0
        } else if g.neighbors(v).any(|w| g.degree(w) == 1) {
            2
        } else {
            1
        };
    }

    // Subtree gray totals, deepest layers first.
    let mut by_depth: Vec<usize> = ledger.d_vertices().collect();
    by_depth.sort_by_key(|&v| std::cmp::Reverse(ledger.depth(v).unwrap()));
    for &v in &by_depth {
        let mut total = ledger.gray[v];
        for &ch in &ledger.children[v] {
            total += ledger.gray_tree[ch];
        }
        ledger.gray_tree[v] = total;
    }

    // Distributed weights and overweights.
    for &v in &by_depth {
        let i = ledger.depth(v).unwrap();
        ledger.wt[v] = rat_int(ledger.gray_tree[v] as i64 + (ell - 2 - i) as i64 * ledger.gray[v] as i64) * alpha;
    }
    for &v in &by_depth {
        let mut b = ledger.wt[v] - alpha;
        for &ch in &ledger.children[v] {
            b += ledger.beta[ch];
        }
        ledger.beta[v] = b;
    }

    // At most one pendant neighbor anywhere; more means the input breaks
    // the pendant lemma (impossible on verified-saturated graphs, k >= 5).
    for v in 0..n {
        let pendants = g.neighbors(v).filter(|&w| g.degree(w) == 1).count();
        if pendants > 1 {
            ledger.warn_or_fail(format!(
                "vertex {v} has {pendants} pendant neighbors; saturated inputs allow one"
            ))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{build_partition, DischargeParams, Label};
    use super::*;
    use crate::graph::Graph;
    use crate::rat::rat;

    /// Anchor construction: two triangles joined by a long degree-two path,
    /// giving a clean single long path for the family.
    fn path_between_triangles(interior: usize) -> Graph {
        let mut edges = vec![(0usize, 2usize), (0, 3), (2, 3), (1, 4), (1, 5), (4, 5)];
        let base = 6;
        let mut prev = 0;
        for i in 0..interior {
            edges.push((prev, base + i));
            prev = base + i;
        }
        edges.push((prev, 1));
        Graph::from_edges(base + interior, &edges).unwrap()
    }

    #[test]
    fn pendant_tree_weights() {
        // A single pendant hanging off a D0 vertex: wt = 0, beta = -alpha.
        let ell = 3;
        let params = DischargeParams::with_small_ell(ell).unwrap();
        // Long path (3 vertices) + anchors, plus a pendant chain off anchor 1:
        let g = path_between_triangles(3);
        // attach pendant p to a D0-vertex: anchor triangles end up near M;
        // build instead: add pendant to the vertex distance 2 from the path.
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        let p = g.n();
        edges.push((2, p)); // vertex 2 sits in the anchor triangle
        let g2 = Graph::from_edges(p + 1, &edges).unwrap();
        let mut ledger = build_partition(&g2, params).unwrap();
        compute_weights(&mut ledger).unwrap();
        let alpha = ledger.params.alpha;
        for v in ledger.d_vertices() {
            if g2.degree(v) == 1 {
                assert_eq!(ledger.wt[v], rat(0, 1));
                assert_eq!(ledger.beta[v], -alpha);
            }
        }
    }

    #[test]
    fn conservation_of_distributed_weight() {
        let ell = 3;
        let params = DischargeParams::with_small_ell(ell).unwrap();
        let g = path_between_triangles(7);
        let mut ledger = build_partition(&g, params).unwrap();
        compute_weights(&mut ledger).unwrap();
        let total: crate::rat::Rat = ledger.d_vertices().map(|v| ledger.wt[v]).sum();
        let gray_halves_in_d: usize = ledger.d_vertices().map(|v| ledger.gray[v]).sum();
        assert_eq!(total, rat(gray_halves_in_d as i64, 2));
    }

    #[test]
    fn gray_totals_match_direct_subtree_sums() {
        let ell = 4;
        let params = DischargeParams::with_small_ell(ell).unwrap();
        let g = path_between_triangles(11);
        let mut ledger = build_partition(&g, params).unwrap();
        compute_weights(&mut ledger).unwrap();
        for v in ledger.d_vertices() {
            let direct: usize = ledger.subtree(v).iter().map(|&x| ledger.gray[x]).sum();
            assert_eq!(ledger.gray_tree[v], direct, "vertex {v}");
        }
        let _ = Label::M; // silence unused import in some cfg combos
    }
}
