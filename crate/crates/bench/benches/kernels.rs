use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scenval_bench::sample_pair;
use scenval_core::measures::{memorizing_ratio_with, nnc_with};
use scenval_core::nn::knn_pooled_with;
use scenval_core::theory::q_quadrature;
use scenval_core::{Density, ExpectationMode, SearchMethod};

fn pooled_knn(c: &mut Criterion) {
    let mut group = c.benchmark_group("knn_pooled");
    for m in [500, 2000] {
        let (e, g) = sample_pair(Density::StandardNormal, 2, m, 1);
        for method in [SearchMethod::BruteForce, SearchMethod::KdTree] {
            group.bench_with_input(BenchmarkId::new(format!("{method:?}"), m), &m, |b, _| {
                b.iter(|| knn_pooled_with(&e, &g, 3, method).unwrap())
            });
        }
    }
    group.finish();
}

fn statistics(c: &mut Criterion) {
    let (e, g) = sample_pair(Density::Cauchy, 2, 5000, 2);
    c.bench_function("memorizing_ratio/m5000", |b| {
        b.iter(|| memorizing_ratio_with(&e, &g, 0.5, SearchMethod::KdTree).unwrap())
    });
    c.bench_function("nnc/k3/m5000", |b| {
        b.iter(|| nnc_with(&e, &g, 3, ExpectationMode::ExactExpectation, SearchMethod::KdTree).unwrap())
    });
    let (e46, g46) = sample_pair(Density::StandardNormal, 46, 1000, 3);
    c.bench_function("memorizing_ratio/d46/m1000", |b| {
        b.iter(|| memorizing_ratio_with(&e46, &g46, 0.5, SearchMethod::KdTree).unwrap())
    });
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_quadrature");
    group.sample_size(10);
    for density in [Density::StandardNormal, Density::Pareto] {
        group.bench_function(density.name(), |b| b.iter(|| q_quadrature(2, 0.5, 2, density).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, pooled_knn, statistics, quadrature);
criterion_main!(benches);
