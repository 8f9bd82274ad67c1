mod common;

use common::*;
use mdgsp::denoise::closed_form;
use mdgsp::{ebem_energy, ebem_minimize, EbemParams, Factor, Graph, GraphKind, Signal2D, SolveMethod, SolverOptions};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn setup(seed: u64, n1: usize, n2: usize) -> (Factor, Factor, Signal2D) {
    let mut r = rng(seed);
    let f1 = Factor::laplacian(&random_graph(&mut r, n1, 0.6)).unwrap();
    let f2 = Factor::laplacian(&random_graph(&mut r, n2, 0.6)).unwrap();
    (f1, f2, Signal2D::new(random_matrix(&mut r, n1, n2)).unwrap())
}

/// `E(x*) ≤ E(x* + ε d)` along random directions, up to `slack`.
fn locally_minimal(
    x: &Signal2D,
    y: &Signal2D,
    params: &EbemParams,
    f1: &Factor,
    f2: &Factor,
    seed: u64,
    slack: f64,
) -> bool {
    let e0 = ebem_energy(x, y, params, &f1.graph, &f2.graph).unwrap();
    let mut r = rng(seed);
    (0..20).all(|_| {
        let (n1, n2) = x.shape();
        let d = random_matrix(&mut r, n1, n2) * r.random_range(1e-3..1e-1);
        let probe = Signal2D::new(x.matrix() + d).unwrap();
        ebem_energy(&probe, y, params, &f1.graph, &f2.graph).unwrap() >= e0 - slack * (1.0 + e0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadratic_matches_dense_solve(seed in any::<u64>(), n1 in 1usize..6, n2 in 1usize..6, g1 in 0.0f64..3.0, g2 in 0.0f64..3.0) {
        let (f1, f2, y) = setup(seed, n1, n2);
        let params = EbemParams { p: 2.0, gamma1: g1, gamma2: g2, q1: 2.0, q2: 2.0 };
        let a = DMatrix::identity(n1 * n2, n1 * n2)
            + kron(&laplacian(n1, f1.graph.edges()), &DMatrix::identity(n2, n2)) * g1
            + kron(&DMatrix::identity(n1, n1), &laplacian(n2, f2.graph.edges())) * g2;
        let dense = a.lu().solve(&vec_rm(y.matrix())).unwrap();
        let x = closed_form(&y, &params, &f1, &f2).unwrap();
        prop_assert!((vec_rm(x.matrix()) - dense).amax() < 1e-10);
    }

    #[test]
    fn one_direction_smooths_columns_independently(seed in any::<u64>(), n1 in 2usize..6, n2 in 1usize..5, g1 in 0.1f64..3.0) {
        let (f1, f2, y) = setup(seed, n1, n2);
        let params = EbemParams { p: 2.0, gamma1: g1, gamma2: 0.0, q1: 2.0, q2: 2.0 };
        let x = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        let a = DMatrix::identity(n1, n1) + laplacian(n1, f1.graph.edges()) * g1;
        let oracle = a.lu().solve(y.matrix()).unwrap();
        prop_assert!(max_abs(&(x.minimizer.matrix() - oracle)) < 1e-10);
    }

    #[test]
    fn smooth_nonquadratic_is_a_local_minimum(seed in any::<u64>(), p in 1.2f64..3.0, q in 1.2f64..3.0) {
        let (f1, f2, y) = setup(seed, 4, 3);
        let params = EbemParams { p, gamma1: 0.7, gamma2: 0.3, q1: q, q2: 2.0 };
        let rep = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        prop_assert_eq!(rep.method, SolveMethod::Gradient);
        prop_assert!(rep.energy <= rep.observation_energy + 1e-12);
        prop_assert!(locally_minimal(&rep.minimizer, &y, &params, &f1, &f2, seed, 1e-7));
    }
}

/// Exact minimizer of `‖x − y‖² + Σ_e c_e |(Dx)_e|` from its box-constrained
/// dual, solved by accelerated projected gradient.
fn tv_oracle(y: &DMatrix<f64>, params: &EbemParams, g1: &Graph, g2: &Graph) -> DMatrix<f64> {
    let (n1, n2) = y.shape();
    let mut rows = Vec::new();
    for &(a, b, w) in g1.edges() {
        for c in 0..n2 {
            rows.push((n2 * a + c, n2 * b + c, params.gamma1 * w));
        }
    }
    for &(a, b, w) in g2.edges() {
        for r in 0..n1 {
            rows.push((n2 * r + a, n2 * r + b, params.gamma2 * w));
        }
    }
    let d = DMatrix::from_fn(rows.len(), n1 * n2, |e, v| {
        if v == rows[e].0 {
            1.0
        } else if v == rows[e].1 {
            -1.0
        } else {
            0.0
        }
    });
    let yv = vec_rm(y);
    let dy = &d * &yv;
    let ddt = &d * d.transpose();
    let lip = ddt.clone().symmetric_eigen().eigenvalues.max() / 2.0;
    let project = |u: DVector<f64>| DVector::from_fn(u.len(), |e, _| u[e].clamp(-rows[e].2, rows[e].2));
    let mut u = DVector::zeros(rows.len());
    let mut v = u.clone();
    let mut t = 1.0f64;
    for _ in 0..200_000 {
        let grad = &ddt * &v / 2.0 - &dy;
        let next = project(&v - grad / lip);
        let tn = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        v = &next + (&next - &u) * ((t - 1.0) / tn);
        u = next;
        t = tn;
    }
    let x = yv - d.transpose() * u / 2.0;
    DMatrix::from_fn(n1, n2, |i, j| x[n2 * i + j])
}

#[test]
fn total_variation_subgradient_approaches_the_dual_optimum() {
    let f1 = Factor::laplacian(&Graph::standard(GraphKind::Path, 4).unwrap()).unwrap();
    let f2 = Factor::laplacian(&Graph::standard(GraphKind::Cycle, 3).unwrap()).unwrap();
    let y = Signal2D::new(random_matrix(&mut rng(3), 4, 3)).unwrap();
    let params = EbemParams {
        p: 2.0,
        gamma1: 0.2,
        gamma2: 0.2,
        q1: 1.0,
        q2: 1.0,
    };
    let rep = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
    assert_eq!(rep.method, SolveMethod::Subgradient);
    let exact = Signal2D::new(tv_oracle(y.matrix(), &params, &f1.graph, &f2.graph)).unwrap();
    let e_star = ebem_energy(&exact, &y, &params, &f1.graph, &f2.graph).unwrap();
    assert!(rep.energy >= e_star - 1e-9);
    assert!(
        (rep.energy - e_star) / e_star < 1e-6,
        "gap {}",
        (rep.energy - e_star) / e_star
    );
    assert!(max_abs(&(rep.minimizer.matrix() - exact.matrix())) < 1e-2);
}
