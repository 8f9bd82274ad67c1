//! Deterministic eigendecomposition of symmetric graph matrices and the
//! bookkeeping needed when eigenvalues repeat.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphMatrices};
use crate::linalg::asymmetry;
use crate::{Error, Result};

/// Components with magnitude at or below this are skipped when fixing signs.
const SIGN_THRESHOLD: f64 = 1e-9;
const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisSource {
    Laplacian,
    Adjacency,
}

impl BasisSource {
    pub fn name(self) -> &'static str {
        match self {
            BasisSource::Laplacian => "laplacian",
            BasisSource::Adjacency => "adjacency",
        }
    }
}

/// Ascending eigenvalues and the orthonormal eigenvector matrix `U`
/// (column `k` is `u_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
    pub source: BasisSource,
}

impl EigenBasis {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        self.values.as_slice()
    }

    pub fn require(&self, source: BasisSource) -> Result<()> {
        if self.source == source {
            Ok(())
        } else {
            Err(Error::SourceMismatch {
                expected: source.name(),
                actual: self.source.name(),
            })
        }
    }

    /// `max |U^T U - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.len();
        let g = self.vectors.transpose() * &self.vectors;
        (g - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Largest scaled residual `‖M u_k − λ_k u_k‖ / max(1, |λ_k|)`.
    pub fn residual(&self, m: &DMatrix<f64>) -> f64 {
        (0..self.len())
            .map(|k| {
                let u = self.vectors.column(k);
                let r = m * u - u * self.values[k];
                r.norm() / self.values[k].abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// `U diag(values) U^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let scaled = &self.vectors * DMatrix::from_diagonal(&self.values);
        scaled * self.vectors.transpose()
    }
}

/// Eigendecomposition of a symmetric matrix, ascending with index
/// tie-break, each eigenvector signed so its first component above `1e-9`
/// in magnitude is positive.
pub fn eigenbasis(m: &DMatrix<f64>, source: BasisSource) -> Result<EigenBasis> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenbasis input"));
    }
    let scale = m.amax().max(1.0);
    let deviation = asymmetry(m);
    if deviation > SYMMETRY_RTOL * scale {
        return Err(Error::Asymmetric { deviation });
    }
    let n = rows;

    let (raw_values, raw_vectors) = if is_diagonal(m) {
        (m.diagonal(), DMatrix::identity(n, n))
    } else {
        let sym = (m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        (eig.eigenvalues, eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]).then_with(|| a.cmp(&b)));

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        let mut v = raw_values[src];
        if source == BasisSource::Laplacian && v < 0.0 && v > -1e-10 * scale {
            v = 0.0;
        }
        values[k] = v;
        let col = raw_vectors.column(src);
        let flip = col.iter().find(|x| x.abs() > SIGN_THRESHOLD).is_some_and(|x| *x < 0.0);
        let sign = if flip { -1.0 } else { 1.0 };
        vectors.set_column(k, &(col * sign));
    }
    Ok(EigenBasis {
        values,
        vectors,
        source,
    })
}

fn is_diagonal(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0))
}

/// Groups of eigenvalue indices that are numerically equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityPartition {
    pub groups: Vec<Vec<usize>>,
}

impl MultiplicityPartition {
    pub fn is_simple(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// Group id for each index.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.groups.iter().map(Vec::len).sum();
        let mut labels = vec![0; n];
        for (g, members) in self.groups.iter().enumerate() {
            for &k in members {
                labels[k] = g;
            }
        }
        labels
    }
}

/// Default multiplicity tolerance `1e-8 · max(1, λ_max)`.
pub fn default_tol_mult(values: &[f64]) -> f64 {
    let top = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    1e-8 * top.max(1.0)
}

/// Single-linkage grouping of `values` (any order): consecutive sorted
/// values closer than `tol` share a group.
pub fn partition_values(values: &[f64], tol: f64) -> MultiplicityPartition {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then_with(|| a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for k in order {
        match groups.last_mut() {
            Some(group) if values[k] - last <= tol => group.push(k),
            _ => groups.push(vec![k]),
        }
        last = values[k];
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    MultiplicityPartition { groups }
}

pub fn multiplicity_partition(basis: &EigenBasis, tol_mult: f64) -> Result<MultiplicityPartition> {
    if tol_mult.is_nan() || tol_mult <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol_mult must be positive, got {tol_mult}"
        )));
    }
    Ok(partition_values(basis.values(), tol_mult))
}

/// `Ψ` with `(k, s) = λ_k^s` for `s = 0..N`.
pub fn vandermonde(values: &[f64]) -> DMatrix<f64> {
    let n = values.len();
    DMatrix::from_fn(n, n, |k, s| values[k].powi(s as i32))
}

/// Whether factor eigenvalues are pairwise distinct at tolerance `tol`.
pub fn is_distinct(values: &[f64], tol: f64) -> bool {
    partition_values(values, tol).is_simple()
}

/// How degeneracy of the sum frequencies `λ1 + λ2` compares with degeneracy
/// of the frequency pairs `(λ1, λ2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    /// Sum-frequency groups holding more than one index pair.
    pub degenerate_sum_groups: usize,
    /// Pair-frequency groups holding more than one index pair.
    pub degenerate_pair_groups: usize,
    /// True when every sum-frequency degeneracy is split by the pair view.
    pub resolved: bool,
}

/// Partition of index pairs `(k1, k2)` by the frequency pair
/// `(λ1_k1, λ2_k2)`, using each factor's own multiplicity groups.
pub fn pair_partition(b1: &EigenBasis, b2: &EigenBasis, tol1: f64, tol2: f64) -> Vec<Vec<(usize, usize)>> {
    let p1 = partition_values(b1.values(), tol1);
    let p2 = partition_values(b2.values(), tol2);
    let mut groups = Vec::with_capacity(p1.groups.len() * p2.groups.len());
    for g1 in &p1.groups {
        for g2 in &p2.groups {
            let mut members = Vec::with_capacity(g1.len() * g2.len());
            for &k1 in g1 {
                for &k2 in g2 {
                    members.push((k1, k2));
                }
            }
            groups.push(members);
        }
    }
    groups
}

pub fn resolution_report(b1: &EigenBasis, b2: &EigenBasis, tol: f64) -> ResolutionReport {
    let (n1, n2) = (b1.len(), b2.len());
    let sums: Vec<f64> = (0..n1)
        .flat_map(|k1| (0..n2).map(move |k2| (k1, k2)))
        .map(|(k1, k2)| b1.values[k1] + b2.values[k2])
        .collect();
    let sum_groups = partition_values(&sums, tol);
    let pairs = pair_partition(b1, b2, tol, tol);
    let degenerate_pair_groups = pairs.iter().filter(|g| g.len() > 1).count();
    ResolutionReport {
        degenerate_sum_groups: sum_groups.groups.iter().filter(|g| g.len() > 1).count(),
        degenerate_pair_groups,
        resolved: degenerate_pair_groups == 0,
    }
}

/// A factor graph with its matrices and eigenbasis.
#[derive(Debug, Clone)]
pub struct Factor {
    pub graph: Graph,
    pub matrices: GraphMatrices,
    pub basis: EigenBasis,
}

impl Factor {
    pub fn laplacian(graph: &Graph) -> Result<Self> {
        let matrices = graph.matrices();
        let basis = eigenbasis(&matrices.laplacian, BasisSource::Laplacian)?;
        Ok(Factor {
            graph: graph.clone(),
            matrices,
            basis,
        })
    }

    pub fn adjacency(graph: &Graph) -> Result<Self> {
        let matrices = graph.matrices();
        let basis = eigenbasis(&matrices.adjacency, BasisSource::Adjacency)?;
        Ok(Factor {
            graph: graph.clone(),
            matrices,
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn laplacian_matrix(&self) -> &DMatrix<f64> {
        &self.matrices.laplacian
    }
}
