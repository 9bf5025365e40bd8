//! Shared instance builders for the benchmark suite.

use satkit_core::graph::Graph;
use satkit_core::pattern::Pattern;
use satkit_core::saturation::{greedy_saturate, PairOrder};

/// Deterministic saturated benchmark instance.
pub fn saturated_instance(n: usize, k: usize, seed: u64) -> Graph {
    greedy_saturate(
        &Graph::empty(n).expect("bench sizes are small"),
        &Pattern::cycle(k).expect("k >= 3"),
        PairOrder::Random { seed },
    )
    .expect("empty seeds are always pattern-free")
}

/// Three hubs joined by doubled subdivided paths; repairably C_{2l}-free.
pub fn theta_triangle(ell: usize) -> Graph {
    let plen = 2 * ell - 3;
    let mut edges = Vec::new();
    let mut next = 3usize;
    for (x, y) in [(0usize, 1usize), (1, 2), (2, 0)] {
        for _ in 0..2 {
            let mut prev = x;
            for _ in 0..plen - 1 {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, y));
        }
    }
    Graph::from_edges(next, &edges).expect("bench sizes are small")
}
