//! Compares the data-parallel helpers against plain sequential
//! iteration on the two workloads that use them in practice: batched
//! Smith normal forms and graph construction. Built with the default
//! `parallel` feature the helper side fans out over rayon; with
//! `--no-default-features` both sides run sequentially and should tie.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench_core::abelian::{smith, IntMatrix};
use workbench_core::budget::Budget;
use workbench_core::fixtures;
use workbench_core::graph::build_reversible_graph_case1;
use workbench_core::par;

fn random_matrices(count: usize, dim: usize, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..dim)
                .map(|_| (0..dim).map(|_| rng.gen_range(-30..=30)).collect())
                .collect();
            IntMatrix::from_rows(&rows)
        })
        .collect()
}

fn bench_snf_batch(c: &mut Criterion) {
    let matrices = random_matrices(64, 12, 7);
    let mut group = c.benchmark_group("snf_batch");
    group.sample_size(20);
    group.bench_function("par_helpers", |b| {
        b.iter(|| {
            let diags = par::map_slice(black_box(&matrices), |m| smith(m).diagonal());
            black_box(diags)
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let diags: Vec<_> = black_box(&matrices)
                .iter()
                .map(|m| smith(m).diagonal())
                .collect();
            black_box(diags)
        })
    });
    group.finish();
}

fn bench_graph_build(c: &mut Criterion) {
    let p = fixtures::dihedral(14).unwrap();
    let budget = Budget::default();
    let mut group = c.benchmark_group("graph_build");
    group.sample_size(20);
    group.bench_function("dihedral_14_case1_pruned", |b| {
        b.iter(|| {
            let g = build_reversible_graph_case1(black_box(&p), true, &budget).unwrap();
            black_box(g.edges().len())
        })
    });
    group.finish();
}

criterion_group!(benches, bench_snf_batch, bench_graph_build);
criterion_main!(benches);
