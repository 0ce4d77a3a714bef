use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualprune::synthetic::TwoPointConfig;
use dualprune::{
    dual_score, dyn_unc, sample_without_replacement, select, simulate_two_point, PruneConfig,
    Strategy,
};
use dualprune_bench::fixture_log;

fn bench_scores(c: &mut Criterion) {
    let mut group = c.benchmark_group("scores");
    for n in [1_000usize, 10_000] {
        let log = fixture_log(n, 30);
        group.bench_with_input(BenchmarkId::new("dual", n), &log, |b, log| {
            b.iter(|| dual_score(black_box(log), 30, 10).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dyn_unc", n), &log, |b, log| {
            b.iter(|| dyn_unc(black_box(log), 30, 10).unwrap())
        });
    }
    group.finish();
}

fn bench_selection(c: &mut Criterion) {
    let log = fixture_log(10_000, 30);
    let cfg = PruneConfig::new(0.7, Strategy::BetaSampling, 1);
    c.bench_function("select beta r=0.7 n=10000", |b| {
        b.iter(|| select(black_box(&log), &cfg).unwrap())
    });

    let weights: Vec<f64> = (1..=100_000).map(|i| i as f64).collect();
    c.bench_function("exponential keys m=10000 of 100000", |b| {
        b.iter(|| sample_without_replacement(black_box(&weights), 10_000, 3).unwrap())
    });
}

fn bench_two_point(c: &mut Criterion) {
    let cfg = TwoPointConfig::reference();
    c.bench_function("two-point eta=0.01", |b| {
        b.iter(|| simulate_two_point(black_box(&cfg)).unwrap())
    });
}

criterion_group!(benches, bench_scores, bench_selection, bench_two_point);
criterion_main!(benches);
