use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use swapreach::oracle::bfs_reachable;
use swapreach::{min_proper_stable, normalize, solve_tree, stream_witness, Shape};
use swapreach_bench::{instance, LARGE};

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_tree");
    group.sample_size(10);
    for shape in [Shape::Tree, Shape::Path, Shape::Star] {
        for n in [100, 1_000, LARGE] {
            let density = if shape == Shape::Star { 0.3 } else { 0.5 };
            let inst = instance(shape, n, density, 1);
            group.bench_with_input(BenchmarkId::new(shape.to_string(), n), &inst, |b, inst| {
                b.iter(|| solve_tree(inst).unwrap())
            });
        }
    }
    group.finish();
}

fn preprocessing(c: &mut Criterion) {
    let mut group = c.benchmark_group("preprocessing");
    group.sample_size(10);
    let inst = instance(Shape::Tree, LARGE, 0.5, 1);
    group.bench_function("normalize", |b| b.iter(|| normalize(&inst)));
    group.bench_function("min_proper_stable", |b| b.iter(|| min_proper_stable(&inst)));
    group.finish();
}

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("witness");
    group.sample_size(10);
    for n in [10, 20, 40] {
        // Seeds whose target differs from the source.
        let inst = (1..)
            .map(|seed| instance(Shape::Tree, n, 0.8, seed))
            .find(|i| i.source() != i.target() && solve_tree(i).unwrap().is_yes())
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| stream_witness(inst, usize::MAX, &mut |_| Ok(())).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [4, 6, 8] {
        let inst = instance(Shape::Complete, n, 0.6, 1);
        group.bench_with_input(BenchmarkId::new("complete", n), &inst, |b, inst| {
            b.iter(|| bfs_reachable(inst, 1_000_000))
        });
    }
    let large = instance(Shape::Tree, LARGE, 0.5, 1);
    group.bench_function(BenchmarkId::new("tree-budget-1000", LARGE), |b| {
        b.iter(|| bfs_reachable(&large, 1_000))
    });
    group.finish();
}

criterion_group!(benches, solver, preprocessing, witness, oracle);
criterion_main!(benches);
