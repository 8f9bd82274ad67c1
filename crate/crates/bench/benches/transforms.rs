use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mdgsp::transform::naive_gft_2d;
use mdgsp::{gft_2d, inverse_gft_2d};
use mdgsp_bench::fixture;
use std::hint::black_box;

fn forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("gft_2d");
    for n in [16, 32, 64] {
        let fx = fixture(n, n, 1);
        group.bench_with_input(BenchmarkId::new("separable", n), &fx, |b, fx| {
            b.iter(|| gft_2d(black_box(&fx.signal), &fx.factor1.basis, &fx.factor2.basis).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("materialized", n), &fx, |b, fx| {
            b.iter(|| naive_gft_2d(black_box(&fx.signal), &fx.factor1.basis, &fx.factor2.basis).unwrap())
        });
    }
    group.finish();
}

fn round_trip(c: &mut Criterion) {
    let fx = fixture(128, 96, 2);
    c.bench_function("round_trip_128x96", |b| {
        b.iter(|| {
            let s = gft_2d(black_box(&fx.signal), &fx.factor1.basis, &fx.factor2.basis).unwrap();
            inverse_gft_2d(&s, &fx.factor1.basis, &fx.factor2.basis).unwrap()
        })
    });
}

criterion_group!(benches, forward, round_trip);
criterion_main!(benches);
