use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mdgsp::{polynomial_filter_vertex, spectral_filter_2d, PolyKernel2D, SpectralKernel2D};
use mdgsp_bench::fixture;
use nalgebra::DMatrix;
use std::hint::black_box;

fn polynomial(c: &mut Criterion) {
    let fx = fixture(48, 48, 3);
    let mut group = c.benchmark_group("polynomial_filter");
    for degree in [1usize, 3, 6] {
        let kernel = PolyKernel2D::new(DMatrix::from_fn(degree + 1, degree + 1, |a, b| {
            1.0 / (1.0 + (a + b) as f64)
        }))
        .unwrap();
        let spectral = SpectralKernel2D::Polynomial(kernel.clone());
        group.bench_with_input(BenchmarkId::new("vertex", degree), &kernel, |b, k| {
            b.iter(|| {
                polynomial_filter_vertex(
                    black_box(&fx.signal),
                    k,
                    fx.factor1.laplacian_matrix(),
                    fx.factor2.laplacian_matrix(),
                )
                .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("spectral", degree), &spectral, |b, k| {
            b.iter(|| spectral_filter_2d(black_box(&fx.signal), k, &fx.factor1.basis, &fx.factor2.basis).unwrap())
        });
    }
    group.finish();
}

fn heat(c: &mut Criterion) {
    let fx = fixture(96, 64, 4);
    let kernel = SpectralKernel2D::Heat { tau1: 0.5, tau2: 2.0 };
    c.bench_function("heat_96x64", |b| {
        b.iter(|| spectral_filter_2d(black_box(&fx.signal), &kernel, &fx.factor1.basis, &fx.factor2.basis).unwrap())
    });
}

criterion_group!(benches, polynomial, heat);
criterion_main!(benches);
