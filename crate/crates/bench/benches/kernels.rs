//! Hot-path benchmarks: fixed-length path search, containment, canonical
//! forms, greedy completion, and the discharging pipeline.

use criterion::{criterion_group, criterion_main, Criterion};
use satkit_bench::{saturated_instance, theta_triangle};
use satkit_core::canon::canonical_form;
use satkit_core::discharging::{discharge, DischargeParams};
use satkit_core::graph::Graph;
use satkit_core::pattern::{contains, creates_on_edge, exact_length_path, Pattern};
use satkit_core::saturation::{greedy_saturate, verify_saturated, PairOrder};
use std::hint::black_box;

fn bench_path_search(c: &mut Criterion) {
    let g = saturated_instance(40, 8, 1);
    let pairs: Vec<(usize, usize)> = g.non_edges().into_iter().take(32).collect();
    c.bench_function("exact_length_path/C8/n40", |b| {
        b.iter(|| {
            for &(x, y) in &pairs {
                black_box(exact_length_path(&g, x, y, 7, None));
            }
        })
    });
}

fn bench_containment(c: &mut Criterion) {
    let g = saturated_instance(24, 6, 2);
    let pat = Pattern::multipartite(vec![2, 2, 2]).unwrap();
    c.bench_function("contains/K222/n24", |b| b.iter(|| black_box(contains(&g, &pat))));
    let cyc = Pattern::cycle(6).unwrap();
    let (x, y) = g.non_edges()[0];
    c.bench_function("creates_on_edge/C6/n24", |b| {
        b.iter(|| black_box(creates_on_edge(&g, x, y, &cyc).unwrap()))
    });
}

fn bench_canonical(c: &mut Criterion) {
    let g = saturated_instance(9, 4, 3);
    c.bench_function("canonical_form/n9", |b| b.iter(|| black_box(canonical_form(&g))));
}

fn bench_greedy(c: &mut Criterion) {
    c.bench_function("greedy_saturate/C6/n24", |b| {
        b.iter(|| {
            let g = greedy_saturate(
                &Graph::empty(24).unwrap(),
                &Pattern::cycle(6).unwrap(),
                PairOrder::Random { seed: 5 },
            )
            .unwrap();
            black_box(g)
        })
    });
}

fn bench_discharge(c: &mut Criterion) {
    let seed = theta_triangle(5);
    let g = greedy_saturate(&seed, &Pattern::cycle(10).unwrap(), PairOrder::Random { seed: 7 }).unwrap();
    assert!(verify_saturated(&g, &Pattern::cycle(10).unwrap(), false).is_saturated());
    let params = DischargeParams::with_small_ell(5).unwrap();
    c.bench_function("discharge/C10/theta", |b| {
        b.iter(|| black_box(discharge(&g, params).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_path_search,
    bench_containment,
    bench_canonical,
    bench_greedy,
    bench_discharge
);
criterion_main!(benches);
