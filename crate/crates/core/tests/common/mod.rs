//! Reference implementations used as oracles. None of these call into the
//! library's numerical code paths.

#![allow(dead_code)]

use mdgsp::{Graph, C64};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entrywise Kronecker product by its definition.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `D − W` from an edge list.
pub fn laplacian(n: usize, edges: &[(usize, usize, f64)]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for &(i, j, w) in edges {
        l[(i, j)] -= w;
        l[(j, i)] -= w;
        l[(i, i)] += w;
        l[(j, j)] += w;
    }
    l
}

/// Weighted random graph on `n` vertices; each pair is an edge with
/// probability `density`.
pub fn random_edges(r: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if r.random::<f64>() < density {
                edges.push((i, j, r.random_range(0.1..3.0)));
            }
        }
    }
    edges
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    Graph::new(n, &random_edges(r, n, density)).expect("valid random graph")
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0))
}

/// Sorted eigenvalues straight from the symmetric solver.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Min gap between consecutive sorted values.
pub fn min_gap(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Row-major flattening: entry `(i1, i2)` goes to `N2·i1 + i2`.
pub fn vec_rm(m: &DMatrix<f64>) -> DVector<f64> {
    let (r, c) = m.shape();
    DVector::from_fn(r * c, |v, _| m[(v / c, v % c)])
}

/// All-pairs hop distances by Floyd–Warshall.
pub fn hop_matrix(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<usize>> {
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(i, j, _) in edges {
        d[i][j] = 1;
        d[j][i] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Unitary 2-D DFT by direct summation.
pub fn dft2(x: &DMatrix<f64>) -> DMatrix<C64> {
    let (n1, n2) = x.shape();
    let tau = std::f64::consts::TAU;
    DMatrix::from_fn(n1, n2, |m1, m2| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n1 {
            for b in 0..n2 {
                let phase = -tau * ((m1 * a) as f64 / n1 as f64 + (m2 * b) as f64 / n2 as f64);
                acc += C64::from_polar(x[(a, b)], phase);
            }
        }
        acc / ((n1 * n2) as f64).sqrt()
    })
}

/// Sample covariance with mean removal and `M − 1` normalization.
pub fn sample_cov(vectors: &[DVector<f64>]) -> DMatrix<f64> {
    let m = vectors.len();
    let n = vectors[0].len();
    let mean = vectors.iter().fold(DVector::zeros(n), |a, v| a + v) / m as f64;
    let mut c = DMatrix::zeros(n, n);
    for v in vectors {
        let d = v - &mean;
        c += &d * d.transpose();
    }
    c / (m - 1) as f64
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}
