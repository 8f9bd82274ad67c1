mod common;

use common::*;
use mdgsp::stationarity::{
    construct_directional_from_gamma, construct_h_from_gamma, sample_directional, sample_directional_spectral,
    sample_fgw, sample_fgw_spectral, test_directional_stationarity, test_fgw_stationarity, DirectionalProcess,
    FgwProcess, NoiseKind, WhiteNoise2D,
};
use mdgsp::{Direction, Factor, Graph, GraphKind, PolyKernel2D, Signal2D};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn p3_p4() -> (Factor, Factor) {
    (
        Factor::laplacian(&Graph::standard(GraphKind::Path, 3).unwrap()).unwrap(),
        Factor::laplacian(&Graph::standard(GraphKind::Path, 4).unwrap()).unwrap(),
    )
}

fn flat(xs: &[Signal2D]) -> Vec<DVector<f64>> {
    xs.iter().map(|x| vec_rm(x.matrix())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fgw_vertex_and_spectral_paths_agree(seed in any::<u64>(), s1 in 0usize..3, s2 in 0usize..4) {
        let (f1, f2) = p3_p4();
        let h = random_matrix(&mut rng(seed), s1 + 1, s2 + 1);
        let proc = FgwProcess::new(PolyKernel2D::new(h).unwrap(), 3, 4).unwrap();
        let noise = WhiteNoise2D::new(3, 4, seed);
        let a = sample_fgw(&proc, &f1, &f2, &noise, 8).unwrap();
        let b = sample_fgw_spectral(&proc, &f1, &f2, &noise, 8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(max_abs(&(x.matrix() - y.matrix())) < 1e-10 * (1.0 + max_abs(x.matrix())));
        }
    }

    #[test]
    fn directional_vertex_and_spectral_paths_agree(seed in any::<u64>(), degree in 0usize..3, second in any::<bool>()) {
        let (f1, f2) = p3_p4();
        let (direction, factor, side) = if second { (Direction::Second, &f2, 3) } else { (Direction::First, &f1, 4) };
        let mut r = rng(seed);
        let coeffs: Vec<DMatrix<f64>> = (0..=degree).map(|_| random_matrix(&mut r, side, side)).collect();
        let proc = DirectionalProcess::new(direction, coeffs, 3, 4).unwrap();
        let noise = WhiteNoise2D::new(3, 4, seed).with_kind(NoiseKind::Rademacher);
        let a = sample_directional(&proc, factor, &noise, 8).unwrap();
        let b = sample_directional_spectral(&proc, factor, &noise, 8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(max_abs(&(x.matrix() - y.matrix())) < 1e-10 * (1.0 + max_abs(x.matrix())));
        }
    }

    #[test]
    fn constructed_kernel_has_prescribed_response(seed in any::<u64>()) {
        let (f1, f2) = p3_p4();
        let gamma = DMatrix::from_fn(3, 4, |_, _| rng(seed).random_range(0.0..4.0));
        let proc = construct_h_from_gamma(&gamma, &f1.basis, &f2.basis).unwrap();
        for (k1, l1) in f1.basis.values().iter().enumerate() {
            for (k2, l2) in f2.basis.values().iter().enumerate() {
                let h = proc.kernel().eval(*l1, *l2);
                prop_assert!((h * h - gamma[(k1, k2)]).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn zero_degree_kernel_scales_white_noise() {
    let (f1, f2) = p3_p4();
    let proc = FgwProcess::new(PolyKernel2D::monomial(0, 0, 1.5), 3, 4).unwrap();
    let xs = sample_fgw(&proc, &f1, &f2, &WhiteNoise2D::new(3, 4, 1), 20_000).unwrap();
    let c = sample_cov(&flat(&xs));
    let tol = 5.0 * (2.0f64 / 20_000.0).sqrt() * 2.25;
    for i in 0..12 {
        assert!((c[(i, i)] - 2.25).abs() < tol);
    }
}

#[test]
fn first_order_kernel_variance_is_squared_frequency() {
    // h = λ1 gives spectral variance λ1² at every (k1, k2)
    let (f1, f2) = p3_p4();
    let proc = FgwProcess::new(PolyKernel2D::monomial(1, 0, 1.0), 3, 4).unwrap();
    let xs = sample_fgw(&proc, &f1, &f2, &WhiteNoise2D::new(3, 4, 2), 20_000).unwrap();
    let spectral: Vec<DVector<f64>> = xs
        .iter()
        .map(|x| vec_rm(&(f1.basis.vectors.transpose() * x.matrix() * &f2.basis.vectors)))
        .collect();
    let c = sample_cov(&spectral);
    for (k1, l1) in f1.basis.values().iter().enumerate() {
        for k2 in 0..4 {
            let v = l1 * l1;
            assert!((c[(4 * k1 + k2, 4 * k1 + k2)] - v).abs() <= 5.0 * (2.0f64 / 20_000.0).sqrt() * (v + 0.9) + 1e-12);
        }
    }
}

#[test]
fn fgw_process_is_stationary_in_each_direction() {
    let (f1, f2) = p3_p4();
    let gamma = DMatrix::from_fn(3, 4, |i, j| 1.0 + (i + 2 * j) as f64 * 0.3);
    let proc = construct_h_from_gamma(&gamma, &f1.basis, &f2.basis).unwrap();
    let m = 20_000;
    let tol = 5.0 / (m as f64).sqrt();
    let xs = sample_fgw(&proc, &f1, &f2, &WhiteNoise2D::new(3, 4, 3), m).unwrap();
    let d1 = test_directional_stationarity(&xs, Direction::First, &f1.basis, tol).unwrap();
    let d2 = test_directional_stationarity(&xs, Direction::Second, &f2.basis, tol).unwrap();
    assert!(d1.slices.pass && d1.spectral.pass && d1.agree);
    assert!(d2.slices.pass && d2.spectral.pass && d2.agree);
}

#[test]
fn directional_process_is_not_fgw_stationary() {
    // geometric correlation along the second factor, not diagonal in its basis
    let (f1, f2) = p3_p4();
    let targets: Vec<DMatrix<f64>> = (0..3)
        .map(|k| DMatrix::from_fn(4, 4, |i, j| (1.0 + k as f64) * 0.8f64.powi((i as i32 - j as i32).abs())))
        .collect();
    let proc = construct_directional_from_gamma(Direction::First, &targets, &f1.basis).unwrap();
    let m = 20_000;
    let tol = 5.0 / (m as f64).sqrt();
    let xs = sample_directional(&proc, &f1, &WhiteNoise2D::new(3, 4, 4), m).unwrap();
    let dir = test_directional_stationarity(&xs, Direction::First, &f1.basis, tol).unwrap();
    assert!(dir.slices.pass && dir.agree);
    let fgw = test_fgw_stationarity(&xs, &f1.basis, &f2.basis, tol).unwrap();
    assert!(!fgw.spectral_full.pass && !fgw.kronecker.pass);
}

#[test]
fn tolerance_tracks_sample_count() {
    // correlation estimates of white noise shrink like 1/√M
    let (f1, f2) = p3_p4();
    let white = |m: usize, seed: u64| -> Vec<Signal2D> {
        WhiteNoise2D::new(3, 4, seed)
            .samples(m)
            .into_iter()
            .map(|z| Signal2D::new(z).unwrap())
            .collect()
    };
    for m in [2_500, 10_000, 40_000] {
        let tol = 5.0 / (m as f64).sqrt();
        let rep = test_fgw_stationarity(&white(m, m as u64), &f1.basis, &f2.basis, tol).unwrap();
        assert!(
            rep.max_spectral_correlation < tol,
            "M={m}: {}",
            rep.max_spectral_correlation
        );
        assert!(rep.max_spectral_correlation > 0.05 * tol);
    }
}

#[test]
fn samples_are_reproducible_and_seed_dependent() {
    let a = WhiteNoise2D::new(3, 4, 9).samples(5);
    let b = WhiteNoise2D::new(3, 4, 9).samples(5);
    let c = WhiteNoise2D::new(3, 4, 10).samples(5);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(WhiteNoise2D::new(3, 4, 9).sample(3), a[3]);
}
