//! Graph gradients and directional variations of 2-D signals.
//!
//! The total `G_n`-directional variation is summed over edge differences
//! and cross-checked against the trace and spectral forms on every call.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::spectral::Factor;
use crate::transform::{gft_2d, Signal2D};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl Direction {
    pub fn number(self) -> u8 {
        match self {
            Direction::First => 1,
            Direction::Second => 2,
        }
    }
}

impl TryFrom<u8> for Direction {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Direction::First),
            2 => Ok(Direction::Second),
            _ => Err(Error::InvalidParameter(format!("direction must be 1 or 2, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalVariationReport {
    pub direction: Direction,
    #[serde(skip)]
    pub local: DMatrix<f64>,
    /// `½ Σ |V_{i1,i2}|²` from the pairwise definition.
    pub total: f64,
    /// `tr(F^T L1 F)` (or `tr(F L2 F^T)`).
    pub trace_total: f64,
    /// `Σ_k λ_k ‖slice k of f̂‖²`.
    pub spectral_total: f64,
    /// `max(|total − trace|, |total − spectral|)`.
    pub residual: f64,
}

/// `(∇_i f)(j) = √w(i,j) (f(j) − f(i))`.
pub fn graph_gradient(f: &DVector<f64>, g: &Graph, i: usize) -> Result<DVector<f64>> {
    if f.len() != g.n() {
        return Err(Error::dims(g.n(), f.len()));
    }
    if i >= g.n() {
        return Err(Error::IndexOutOfRange { index: i, n: g.n() });
    }
    Ok(DVector::from_fn(g.n(), |j, _| g.weight(i, j).sqrt() * (f[j] - f[i])))
}

/// Euclidean norm of the direction-`n` gradient components at `(i1, i2)`;
/// `factor_graph` is `G1` for [`Direction::First`] and `G2` otherwise.
pub fn local_directional_variation(
    f: &Signal2D,
    direction: Direction,
    factor_graph: &Graph,
    vertex: (usize, usize),
) -> Result<f64> {
    let (n1, n2) = f.shape();
    let (i1, i2) = vertex;
    if i1 >= n1 {
        return Err(Error::IndexOutOfRange { index: i1, n: n1 });
    }
    if i2 >= n2 {
        return Err(Error::IndexOutOfRange { index: i2, n: n2 });
    }
    let axis_len = match direction {
        Direction::First => n1,
        Direction::Second => n2,
    };
    if factor_graph.n() != axis_len {
        return Err(Error::dims(axis_len, factor_graph.n()));
    }
    let m = f.matrix();
    let sum: f64 = match direction {
        Direction::First => factor_graph
            .neighbors(i1)
            .map(|(j1, w)| w * (m[(j1, i2)] - m[(i1, i2)]).powi(2))
            .sum(),
        Direction::Second => factor_graph
            .neighbors(i2)
            .map(|(j2, w)| w * (m[(i1, j2)] - m[(i1, i2)]).powi(2))
            .sum(),
    };
    Ok(sum.sqrt())
}

/// Total directional variation along `factor` (which must be `G1` for
/// [`Direction::First`], `G2` for [`Direction::Second`]).
pub fn total_directional_variation(
    f: &Signal2D,
    direction: Direction,
    factor: &Factor,
) -> Result<DirectionalVariationReport> {
    let (n1, n2) = f.shape();
    let m = f.matrix();
    let axis_len = match direction {
        Direction::First => n1,
        Direction::Second => n2,
    };
    if factor.n() != axis_len {
        return Err(Error::dims(axis_len, factor.n()));
    }

    let mut local = DMatrix::zeros(n1, n2);
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            local[(i1, i2)] = local_directional_variation(f, direction, &factor.graph, (i1, i2))?;
        }
    }
    let total = 0.5 * local.iter().map(|v| v * v).sum::<f64>();

    let l = factor.laplacian_matrix();
    let trace_total = match direction {
        Direction::First => (m.transpose() * l * m).trace(),
        Direction::Second => (m * l * m.transpose()).trace(),
    };

    // the other factor's basis does not affect slice norms; use identity
    let identity = identity_basis(match direction {
        Direction::First => n2,
        Direction::Second => n1,
    });
    let spectrum = match direction {
        Direction::First => gft_2d(f, &factor.basis, &identity)?,
        Direction::Second => gft_2d(f, &identity, &factor.basis)?,
    };
    let power = spectrum.power();
    let spectral_total: f64 = match direction {
        Direction::First => (0..n1).map(|k| factor.basis.values[k] * power.row(k).sum()).sum(),
        Direction::Second => (0..n2).map(|k| factor.basis.values[k] * power.column(k).sum()).sum(),
    };
    let residual = (total - trace_total).abs().max((total - spectral_total).abs());
    Ok(DirectionalVariationReport {
        direction,
        local,
        total,
        trace_total,
        spectral_total,
        residual,
    })
}

fn identity_basis(n: usize) -> crate::spectral::EigenBasis {
    crate::spectral::EigenBasis {
        values: DVector::zeros(n),
        vectors: DMatrix::identity(n, n),
        source: crate::spectral::BasisSource::Laplacian,
    }
}

/// `f^T (L1 ⊕ L2) f` on the flattened signal.
pub fn total_quadratic_variation(f: &Signal2D, l1: &DMatrix<f64>, l2: &DMatrix<f64>) -> f64 {
    let m = f.matrix();
    (m.transpose() * l1 * m).trace() + (m * l2 * m.transpose()).trace()
}
