//! Weighted undirected simple graphs, their matrices, and Cartesian products.
//!
//! Vertices are `0..n`. Product graphs order `V1 × V2` lexicographically,
//! `(i1, i2) -> N2 * i1 + i2`, which is the flattening used throughout the
//! crate.

use std::collections::{BTreeSet, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::kron_sum;
use crate::{Error, Result};

/// Undirected weighted simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    /// Canonical edges `(i, j, w)` with `i < j`, sorted.
    edges: Vec<(usize, usize, f64)>,
    weights: DMatrix<f64>,
}

/// On-disk form: `{"n": 4, "edges": [[0, 1, 1.0], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Path,
    Cycle,
    Wheel,
    Edgeless,
    Complete,
}

impl GraphKind {
    fn min_vertices(self) -> usize {
        match self {
            GraphKind::Path | GraphKind::Edgeless | GraphKind::Complete => 1,
            GraphKind::Cycle => 3,
            GraphKind::Wheel => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::Cycle => "cycle",
            GraphKind::Wheel => "wheel",
            GraphKind::Edgeless => "edgeless",
            GraphKind::Complete => "complete",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => GraphKind::Path,
            "cycle" => GraphKind::Cycle,
            "wheel" => GraphKind::Wheel,
            "edgeless" => GraphKind::Edgeless,
            "complete" => GraphKind::Complete,
            other => return Err(Error::InvalidParameter(format!("unknown graph kind `{other}`"))),
        })
    }
}

/// Adjacency `W`, degree `D` and Laplacian `L = D - W`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMatrices {
    pub adjacency: DMatrix<f64>,
    pub degree: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
}

impl Graph {
    /// Builds a graph from `(i, j, w)` triples. Rejects loops, duplicate
    /// unordered pairs, nonpositive weights and out-of-range indices.
    pub fn new(n: usize, weighted_edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = DMatrix::zeros(n, n);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(weighted_edges.len());
        for &(i, j, w) in weighted_edges {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if i == j {
                return Err(Error::LoopEdge(i));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { i, j, weight: w });
            }
            let (a, b) = (i.min(j), i.max(j));
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge(a, b));
            }
            weights[(a, b)] = w;
            weights[(b, a)] = w;
            edges.push((a, b, w));
        }
        edges.sort_by_key(|e| (e.0, e.1));
        Ok(Graph { n, edges, weights })
    }

    /// Unit-weight graph of a standard family. The wheel's hub is vertex 0
    /// and its rim is the cycle `1, 2, ..., n-1`.
    pub fn standard(kind: GraphKind, n: usize) -> Result<Self> {
        if n < kind.min_vertices() {
            return Err(Error::TooFewVertices {
                kind: kind.name(),
                min: kind.min_vertices(),
                n,
            });
        }
        let mut edges = Vec::new();
        match kind {
            GraphKind::Path => edges.extend((1..n).map(|i| (i - 1, i, 1.0))),
            GraphKind::Cycle => {
                edges.extend((1..n).map(|i| (i - 1, i, 1.0)));
                edges.push((0, n - 1, 1.0));
            }
            GraphKind::Wheel => {
                edges.extend((1..n).map(|i| (0, i, 1.0)));
                edges.extend((2..n).map(|i| (i - 1, i, 1.0)));
                edges.push((1, n - 1, 1.0));
            }
            GraphKind::Edgeless => {}
            GraphKind::Complete => {
                for i in 0..n {
                    edges.extend(((i + 1)..n).map(|j| (i, j, 1.0)));
                }
            }
        }
        Graph::new(n, &edges)
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        Graph::new(file.n, &file.edges)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.clone(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)?;
        Graph::from_file(&file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.weights.row(i).sum()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.n).filter_map(move |j| {
            let w = self.weights[(i, j)];
            (w > 0.0).then_some((j, w))
        })
    }

    pub fn matrices(&self) -> GraphMatrices {
        let adjacency = self.weights.clone();
        let degrees: Vec<f64> = (0..self.n).map(|i| self.degree(i)).collect();
        let degree = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(degrees));
        let laplacian = &degree - &adjacency;
        GraphMatrices {
            adjacency,
            degree,
            laplacian,
        }
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        self.matrices().laplacian
    }

    /// Unweighted hop distance from `source` to every vertex; `None` if
    /// unreachable.
    pub fn hop_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        if source >= self.n {
            return Err(Error::IndexOutOfRange {
                index: source,
                n: self.n,
            });
        }
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for (u, _) in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.hop_distances(0).is_ok_and(|d| d.iter().all(Option::is_some))
    }
}

/// `G1 □ G2` together with its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductGraph {
    pub g1: Graph,
    pub g2: Graph,
    pub graph: Graph,
}

impl ProductGraph {
    pub fn shape(&self) -> (usize, usize) {
        (self.g1.n(), self.g2.n())
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        self.g2.n() * i1 + i2
    }

    #[inline]
    pub fn pair(&self, v: usize) -> (usize, usize) {
        (v / self.g2.n(), v % self.g2.n())
    }

    /// `L1 ⊕ L2`, built from the factors rather than from the product edges.
    pub fn kronecker_laplacian(&self) -> DMatrix<f64> {
        kron_sum(&self.g1.laplacian(), &self.g2.laplacian())
    }

    pub fn kronecker_adjacency(&self) -> DMatrix<f64> {
        kron_sum(self.g1.weights(), self.g2.weights())
    }
}

/// Cartesian product with weight rule
/// `w((i1,i2),(j1,j2)) = w1(i1,j1) δ(i2,j2) + δ(i1,j1) w2(i2,j2)`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> ProductGraph {
    let (n1, n2) = (g1.n(), g2.n());
    let idx = |i1: usize, i2: usize| n2 * i1 + i2;
    let mut edges = Vec::with_capacity(n2 * g1.edge_count() + n1 * g2.edge_count());
    for &(a, b, w) in g1.edges() {
        for i2 in 0..n2 {
            edges.push((idx(a, i2), idx(b, i2), w));
        }
    }
    for &(a, b, w) in g2.edges() {
        for i1 in 0..n1 {
            edges.push((idx(i1, a), idx(i1, b), w));
        }
    }
    let graph = Graph::new(n1 * n2, &edges).expect("product of valid simple graphs is a valid simple graph");
    ProductGraph {
        g1: g1.clone(),
        g2: g2.clone(),
        graph,
    }
}
