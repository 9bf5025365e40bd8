use satkit_core::graph::Graph;
use satkit_core::pattern::Pattern;
use satkit_core::saturation::{greedy_saturate, verify_saturated, PairOrder, is_free};
use std::time::Instant;

// Triangle core with edges + subdivided paths between hub pairs.
fn core_paths(path_lens: &[(usize, usize, usize)]) -> Graph {
    // (x, y, len) with x,y in {0,1,2}
    let mut edges = vec![(0usize, 1usize), (1, 2), (0, 2)];
    let mut next = 3usize;
    for &(x, y, len) in path_lens {
        let mut prev = x;
        for _ in 0..len - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, y));
    }
    Graph::from_edges(next, &edges).unwrap()
}

#[test]
fn probe_c8_designed() {
    let pat = Pattern::cycle(8).unwrap();
    // n = 3 + 22*4 + 3*3 = 100; m = 3 + 22*5 + 3*4 = 125.
    let mut lens = Vec::new();
    for i in 0..22usize {
        let pair = [(0, 1), (1, 2), (0, 2)][i % 3];
        lens.push((pair.0, pair.1, 5));
    }
    for pair in [(0usize, 1usize), (1, 2), (0, 2)] {
        lens.push((pair.0, pair.1, 4));
    }
    let seed = core_paths(&lens);
    println!("seed: n={} m={} free={}", seed.n(), seed.edge_count(), is_free(&seed, &pat));
    let t = Instant::now();
    let g = greedy_saturate(&seed, &pat, PairOrder::Random { seed: 3 }).unwrap();
    println!("repaired: n={} m={} ({:?})", g.n(), g.edge_count(), t.elapsed());
    let t = Instant::now();
    println!("verified: {} ({:?})", verify_saturated(&g, &pat, false).is_saturated(), t.elapsed());
}
