mod common;

use common::*;
use mdgsp::filtering::{filter_1d_kernel_on_product, representable_as_sum_kernel};
use mdgsp::{
    cartesian_product, locality_neighborhood, polynomial_filter_vertex, spectral_filter_2d, Factor, Graph, GraphKind,
    Kernel1D, PolyKernel2D, Signal2D, SpectralKernel2D,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn graphs(seed: u64, n1: usize, n2: usize) -> (Factor, Factor, Signal2D) {
    let mut r = rng(seed);
    let f1 = Factor::laplacian(&random_graph(&mut r, n1, 0.5)).unwrap();
    let f2 = Factor::laplacian(&random_graph(&mut r, n2, 0.5)).unwrap();
    (f1, f2, Signal2D::new(random_matrix(&mut r, n1, n2)).unwrap())
}

/// `Σ h L1^s1 X L2^s2` with explicit matrix powers.
fn poly_oracle(x: &DMatrix<f64>, h: &DMatrix<f64>, l1: &DMatrix<f64>, l2: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for s1 in 0..h.nrows() {
        for s2 in 0..h.ncols() {
            out += l1.clone().pow(s1 as u32) * x * l2.clone().pow(s2 as u32) * h[(s1, s2)];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vertex_filter_matches_power_oracle(seed in any::<u64>(), n1 in 1usize..6, n2 in 1usize..6, s1 in 0usize..4, s2 in 0usize..4) {
        let (f1, f2, x) = graphs(seed, n1, n2);
        let h = random_matrix(&mut rng(seed ^ 7), s1 + 1, s2 + 1);
        let k = PolyKernel2D::new(h.clone()).unwrap();
        let got = polynomial_filter_vertex(&x, &k, f1.laplacian_matrix(), f2.laplacian_matrix()).unwrap();
        let oracle = poly_oracle(x.matrix(), &h, &laplacian(n1, f1.graph.edges()), &laplacian(n2, f2.graph.edges()));
        let scale = 1.0 + max_abs(&oracle);
        prop_assert!(max_abs(&(got.matrix() - &oracle)) < 1e-11 * scale);
        let spec = spectral_filter_2d(&x, &SpectralKernel2D::Polynomial(k), &f1.basis, &f2.basis).unwrap();
        prop_assert!(max_abs(&(spec.matrix() - &oracle)) < 1e-10 * scale);
    }

    #[test]
    fn heat_kernel_is_matrix_exponential(seed in any::<u64>(), n1 in 1usize..6, n2 in 1usize..6, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let (f1, f2, x) = graphs(seed, n1, n2);
        let y = spectral_filter_2d(&x, &SpectralKernel2D::Heat { tau1: t1, tau2: t2 }, &f1.basis, &f2.basis).unwrap();
        let e1 = (laplacian(n1, f1.graph.edges()) * -t1).exp();
        let e2 = (laplacian(n2, f2.graph.edges()) * -t2).exp();
        prop_assert!(max_abs(&(y.matrix() - e1 * x.matrix() * e2)) < 1e-10);
    }

    #[test]
    fn sum_kernel_is_a_product_graph_filter(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5, c in prop::collection::vec(-1.0f64..1.0, 1..4)) {
        let (f1, f2, x) = graphs(seed, n1, n2);
        let h = Kernel1D::Polynomial(c.clone());
        let y = filter_1d_kernel_on_product(&x, &h, &f1.basis, &f2.basis).unwrap();
        let pg = cartesian_product(&f1.graph, &f2.graph);
        let l = laplacian(n1 * n2, pg.graph.edges());
        let mut oracle = nalgebra::DVector::zeros(n1 * n2);
        for (s, cs) in c.iter().enumerate() {
            oracle += l.clone().pow(s as u32) * vec_rm(x.matrix()) * *cs;
        }
        prop_assert!((vec_rm(y.matrix()) - oracle).amax() < 1e-9);
        prop_assert!(representable_as_sum_kernel(&SpectralKernel2D::Sum1D(h), &f1.basis, &f2.basis, 1e-9).unwrap());
    }
}

#[test]
fn separable_kernel_on_equal_factors_is_not_a_sum_kernel() {
    let p3 = Factor::laplacian(&Graph::standard(GraphKind::Path, 3).unwrap()).unwrap();
    // λ = 0, 1, 3: pairs (0,1) and (1,0) share a sum; weight them unequally
    let k = SpectralKernel2D::Separable(Kernel1D::Heat(1.0), Kernel1D::Heat(0.0));
    assert!(!representable_as_sum_kernel(&k, &p3.basis, &p3.basis, 1e-9).unwrap());
    let iso = SpectralKernel2D::Heat { tau1: 0.5, tau2: 0.5 };
    assert!(representable_as_sum_kernel(&iso, &p3.basis, &p3.basis, 1e-9).unwrap());
}

#[test]
fn neighborhood_of_monomials_is_a_hop_box() {
    let g1 = Graph::standard(GraphKind::Path, 6).unwrap();
    let g2 = Graph::standard(GraphKind::Cycle, 7).unwrap();
    let pg = cartesian_product(&g1, &g2);
    let h1 = hop_matrix(6, g1.edges());
    let h2 = hop_matrix(7, g2.edges());
    for (s1, s2) in [(0, 0), (1, 2), (3, 1)] {
        let k = PolyKernel2D::monomial(s1, s2, 1.0);
        let nb = locality_neighborhood(&pg, &k, (2, 3)).unwrap();
        let expected: usize = (0..6).filter(|&j| h1[2][j] <= s1).count() * (0..7).filter(|&j| h2[3][j] <= s2).count();
        assert_eq!(nb.len(), expected);
    }
}
