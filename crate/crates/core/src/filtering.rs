//! 2-D graph spectral filtering.
//!
//! A kernel is evaluated at the eigenvalue annotations `(λ1_k1, λ2_k2)`, so
//! equal eigenvalues always receive equal responses and the result does not
//! depend on the basis chosen inside a degenerate eigenspace.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::graph::ProductGraph;
use crate::linalg::C64;
use crate::spectral::{partition_values, EigenBasis};
use crate::transform::{gft_2d, inverse_gft_2d, Signal2D};
use crate::{Error, Result};

/// Coefficients `h_{s1 s2}` of `Σ h_{s1 s2} λ1^s1 λ2^s2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyKernel2D {
    coeffs: DMatrix<f64>,
}

impl PolyKernel2D {
    pub fn new(coeffs: DMatrix<f64>) -> Result<Self> {
        if coeffs.nrows() == 0 || coeffs.ncols() == 0 {
            return Err(Error::InvalidParameter(
                "polynomial kernel needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("polynomial kernel coefficients"));
        }
        Ok(PolyKernel2D { coeffs })
    }

    /// Kernel with a single nonzero coefficient `h_{s1 s2} = value`.
    pub fn monomial(s1: usize, s2: usize, value: f64) -> Self {
        let mut coeffs = DMatrix::zeros(s1 + 1, s2 + 1);
        coeffs[(s1, s2)] = value;
        PolyKernel2D { coeffs }
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    /// `(S1, S2)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.coeffs.nrows() - 1, self.coeffs.ncols() - 1)
    }

    pub fn eval(&self, l1: f64, l2: f64) -> f64 {
        let (s1max, s2max) = self.degrees();
        let mut acc = 0.0;
        for s1 in (0..=s1max).rev() {
            let mut row = 0.0;
            for s2 in (0..=s2max).rev() {
                row = row * l2 + self.coeffs[(s1, s2)];
            }
            acc = acc * l1 + row;
        }
        acc
    }
}

/// 1-D kernel `ĥ(λ)`.
#[derive(Clone)]
pub enum Kernel1D {
    /// `Σ c_s λ^s`.
    Polynomial(Vec<f64>),
    /// `exp(−τ λ)`.
    Heat(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Kernel1D {
    pub fn eval(&self, lambda: f64) -> f64 {
        match self {
            Kernel1D::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &x| acc * lambda + x),
            Kernel1D::Heat(tau) => (-tau * lambda).exp(),
            Kernel1D::Custom(f) => f(lambda),
        }
    }
}

impl fmt::Debug for Kernel1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel1D::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Kernel1D::Heat(t) => f.debug_tuple("Heat").field(t).finish(),
            Kernel1D::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Frequency response `ĥ(λ1, λ2)`.
#[derive(Clone)]
pub enum SpectralKernel2D {
    /// Responses tabulated on a grid of frequency pairs; lookups match an
    /// annotation to a grid point within `1e-8 · max(1, |λ|)`.
    Tabulated {
        lambda1: Vec<f64>,
        lambda2: Vec<f64>,
        values: DMatrix<f64>,
    },
    Polynomial(PolyKernel2D),
    /// `ĥ1(λ1) ĥ2(λ2)`.
    Separable(Kernel1D, Kernel1D),
    /// `ĥ(λ1 + λ2)`, an ordinary 1-D kernel on the product graph.
    Sum1D(Kernel1D),
    /// `exp(−τ1 λ1 − τ2 λ2)`.
    Heat {
        tau1: f64,
        tau2: f64,
    },
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for SpectralKernel2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralKernel2D::Tabulated { lambda1, lambda2, .. } => f
                .debug_struct("Tabulated")
                .field("lambda1", lambda1)
                .field("lambda2", lambda2)
                .finish_non_exhaustive(),
            SpectralKernel2D::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            SpectralKernel2D::Separable(a, b) => f.debug_tuple("Separable").field(a).field(b).finish(),
            SpectralKernel2D::Sum1D(h) => f.debug_tuple("Sum1D").field(h).finish(),
            SpectralKernel2D::Heat { tau1, tau2 } => {
                f.debug_struct("Heat").field("tau1", tau1).field("tau2", tau2).finish()
            }
            SpectralKernel2D::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

fn lookup(grid: &[f64], lambda: f64) -> Option<usize> {
    let tol = 1e-8 * lambda.abs().max(1.0);
    grid.iter().position(|g| (g - lambda).abs() <= tol)
}

impl SpectralKernel2D {
    pub fn identity() -> Self {
        SpectralKernel2D::Polynomial(PolyKernel2D::monomial(0, 0, 1.0))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpectralKernel2D::Tabulated { .. } => "tabulated",
            SpectralKernel2D::Polynomial(_) => "polynomial",
            SpectralKernel2D::Separable(..) => "separable",
            SpectralKernel2D::Sum1D(_) => "sum-1d",
            SpectralKernel2D::Heat { .. } => "heat",
            SpectralKernel2D::Custom(_) => "custom",
        }
    }

    pub fn eval(&self, l1: f64, l2: f64) -> Result<f64> {
        let v = match self {
            SpectralKernel2D::Tabulated {
                lambda1,
                lambda2,
                values,
            } => match (lookup(lambda1, l1), lookup(lambda2, l2)) {
                (Some(a), Some(b)) => values[(a, b)],
                _ => {
                    return Err(Error::KernelMissing {
                        lambda1: l1,
                        lambda2: l2,
                    })
                }
            },
            SpectralKernel2D::Polynomial(p) => p.eval(l1, l2),
            SpectralKernel2D::Separable(h1, h2) => h1.eval(l1) * h2.eval(l2),
            SpectralKernel2D::Sum1D(h) => h.eval(l1 + l2),
            SpectralKernel2D::Heat { tau1, tau2 } => (-tau1 * l1 - tau2 * l2).exp(),
            SpectralKernel2D::Custom(f) => f(l1, l2),
        };
        if !v.is_finite() {
            return Err(Error::KernelNotFinite {
                lambda1: l1,
                lambda2: l2,
            });
        }
        Ok(v)
    }

    /// Response matrix at every `(λ1_k1, λ2_k2)`.
    pub fn response(&self, lambda1: &[f64], lambda2: &[f64]) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(lambda1.len(), lambda2.len());
        for (a, &l1) in lambda1.iter().enumerate() {
            for (b, &l2) in lambda2.iter().enumerate() {
                out[(a, b)] = self.eval(l1, l2)?;
            }
        }
        Ok(out)
    }
}

/// On-disk kernel description.
///
/// * `polynomial`: `coeffs` is the `h_{s1 s2}` matrix.
/// * `heat`: `params.tau1`, `params.tau2`.
/// * `separable`: `coeffs = [[c0, c1, ...], [d0, d1, ...]]`, polynomial in
///   each direction.
/// * `sum-1d`: `coeffs = [[c0, c1, ...]]` polynomial in `λ1 + λ2`, or
///   `params.tau` for a heat kernel on the sum.
/// * `tabulated`: `coeffs` is the table, `params.lambda1` / `params.lambda2`
///   its frequency grid.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: String,
    #[serde(default)]
    pub coeffs: Vec<Vec<f64>>,
    #[serde(default)]
    pub params: KernelParams,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KernelParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<Vec<f64>>,
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Format(
            "coefficient table must be a non-empty rectangular array".into(),
        ));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl KernelSpec {
    pub fn build(&self) -> Result<SpectralKernel2D> {
        let missing = |what: &str| Error::Format(format!("{} kernel requires {what}", self.kind));
        Ok(match self.kind.as_str() {
            "polynomial" => SpectralKernel2D::Polynomial(PolyKernel2D::new(rows_to_matrix(&self.coeffs)?)?),
            "heat" => SpectralKernel2D::Heat {
                tau1: self.params.tau1.ok_or_else(|| missing("params.tau1"))?,
                tau2: self.params.tau2.ok_or_else(|| missing("params.tau2"))?,
            },
            "separable" => {
                if self.coeffs.len() != 2 {
                    return Err(missing("two coefficient rows"));
                }
                SpectralKernel2D::Separable(
                    Kernel1D::Polynomial(self.coeffs[0].clone()),
                    Kernel1D::Polynomial(self.coeffs[1].clone()),
                )
            }
            "sum-1d" => match (self.params.tau, self.coeffs.first()) {
                (Some(tau), _) => SpectralKernel2D::Sum1D(Kernel1D::Heat(tau)),
                (None, Some(c)) if !c.is_empty() => SpectralKernel2D::Sum1D(Kernel1D::Polynomial(c.clone())),
                _ => return Err(missing("params.tau or one coefficient row")),
            },
            "tabulated" => {
                let values = rows_to_matrix(&self.coeffs)?;
                let lambda1 = self.params.lambda1.clone().ok_or_else(|| missing("params.lambda1"))?;
                let lambda2 = self.params.lambda2.clone().ok_or_else(|| missing("params.lambda2"))?;
                if values.shape() != (lambda1.len(), lambda2.len()) {
                    return Err(Error::dims(
                        format!("{}x{}", lambda1.len(), lambda2.len()),
                        format!("{}x{}", values.nrows(), values.ncols()),
                    ));
                }
                SpectralKernel2D::Tabulated {
                    lambda1,
                    lambda2,
                    values,
                }
            }
            other => return Err(Error::Format(format!("unknown kernel kind `{other}`"))),
        })
    }
}

/// Output spectrum is `ĥ(λ1_k1, λ2_k2) · f̂_in(k1, k2)`; returned in the
/// vertex domain.
pub fn spectral_filter_2d(
    f: &Signal2D,
    kernel: &SpectralKernel2D,
    b1: &EigenBasis,
    b2: &EigenBasis,
) -> Result<Signal2D> {
    let mut spec = gft_2d(f, b1, b2)?;
    let response = kernel.response(&spec.lambda1, &spec.lambda2)?;
    spec.coeffs.zip_apply(&response, |z, h| *z *= C64::new(h, 0.0));
    inverse_gft_2d(&spec, b1, b2)
}

/// `Σ h_{s1 s2} L1^s1 F L2^s2`, evaluated without any eigendecomposition.
pub fn polynomial_filter_vertex(
    f: &Signal2D,
    kernel: &PolyKernel2D,
    l1: &DMatrix<f64>,
    l2: &DMatrix<f64>,
) -> Result<Signal2D> {
    let (n1, n2) = f.shape();
    if l1.shape() != (n1, n1) || l2.shape() != (n2, n2) {
        return Err(Error::dims(
            format!("{n1}x{n1} and {n2}x{n2}"),
            format!("{}x{} and {}x{}", l1.nrows(), l1.ncols(), l2.nrows(), l2.ncols()),
        ));
    }
    let (s1max, s2max) = kernel.degrees();
    let h = kernel.coeffs();
    // right[s1] = Σ_s2 h[s1,s2] F L2^s2, via Horner in L2
    let right: Vec<DMatrix<f64>> = (0..=s1max)
        .map(|s1| {
            let mut acc = f.matrix() * h[(s1, s2max)];
            for s2 in (0..s2max).rev() {
                acc = acc * l2 + f.matrix() * h[(s1, s2)];
            }
            acc
        })
        .collect();
    // Horner in L1
    let mut out = right[s1max].clone();
    for s1 in (0..s1max).rev() {
        out = l1 * out + &right[s1];
    }
    Signal2D::new(out)
}

/// `ĥ(λ1 + λ2)` applied through the 2-D spectrum.
pub fn filter_1d_kernel_on_product(f: &Signal2D, h: &Kernel1D, b1: &EigenBasis, b2: &EigenBasis) -> Result<Signal2D> {
    spectral_filter_2d(f, &SpectralKernel2D::Sum1D(h.clone()), b1, b2)
}

/// Whether `kernel` agrees with some 1-D kernel on the sum frequency, i.e.
/// takes one value on every group of equal `λ1 + λ2` (within `tol`).
pub fn representable_as_sum_kernel(
    kernel: &SpectralKernel2D,
    b1: &EigenBasis,
    b2: &EigenBasis,
    tol: f64,
) -> Result<bool> {
    let (n1, n2) = (b1.len(), b2.len());
    let response = kernel.response(b1.values(), b2.values())?;
    let pairs: Vec<(usize, usize)> = (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b))).collect();
    let sums: Vec<f64> = pairs.iter().map(|&(a, b)| b1.values[a] + b2.values[b]).collect();
    let groups = partition_values(&sums, crate::spectral::default_tol_mult(&sums));
    Ok(groups.groups.iter().all(|g| {
        let first = response[pairs[g[0]]];
        g.iter().all(|&i| (response[pairs[i]] - first).abs() <= tol)
    }))
}

/// Vertices `(j1, j2)` reachable in `t1` hops along `G1` and `t2` along `G2`
/// with `t1 ≤ s1`, `t2 ≤ s2` for some nonzero `h_{s1 s2}`. Sorted.
pub fn locality_neighborhood(
    pg: &ProductGraph,
    kernel: &PolyKernel2D,
    vertex: (usize, usize),
) -> Result<BTreeSet<(usize, usize)>> {
    let d1 = pg.g1.hop_distances(vertex.0)?;
    let d2 = pg.g2.hop_distances(vertex.1)?;
    let h = kernel.coeffs();
    let support: Vec<(usize, usize)> = (0..h.nrows())
        .flat_map(|a| (0..h.ncols()).map(move |b| (a, b)))
        .filter(|&p| h[p] != 0.0)
        .collect();
    let mut out = BTreeSet::new();
    for (j1, t1) in d1.iter().enumerate() {
        let Some(t1) = *t1 else { continue };
        for (j2, t2) in d2.iter().enumerate() {
            let Some(t2) = *t2 else { continue };
            if support.iter().any(|&(s1, s2)| t1 <= s1 && t2 <= s2) {
                out.insert((j1, j2));
            }
        }
    }
    Ok(out)
}
