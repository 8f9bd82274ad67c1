use nalgebra::DMatrix;
use rayon::prelude::*;

use super::noise::WhiteNoise2D;
use crate::filtering::{polynomial_filter_vertex, PolyKernel2D};
use crate::spectral::{default_tol_mult, is_distinct, vandermonde, EigenBasis, Factor};
use crate::transform::{Signal2D, SignalMV};
use crate::variation::Direction;
use crate::{Error, Result};

/// `X = Σ h_{s1 s2} L1^s1 Z L2^s2` driven by white noise `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct FgwProcess {
    kernel: PolyKernel2D,
}

impl FgwProcess {
    /// Degrees must not exceed `(n1 − 1, n2 − 1)`.
    pub fn new(kernel: PolyKernel2D, n1: usize, n2: usize) -> Result<Self> {
        let (s1, s2) = kernel.degrees();
        if s1 + 1 > n1 || s2 + 1 > n2 {
            return Err(Error::DegreeOverflow {
                s1,
                s2,
                max1: n1.saturating_sub(1),
                max2: n2.saturating_sub(1),
            });
        }
        Ok(FgwProcess { kernel })
    }

    pub fn kernel(&self) -> &PolyKernel2D {
        &self.kernel
    }

    /// `h̃ = Ψ1 H Ψ2^T`, the gain at each frequency pair.
    pub fn spectral_gain(&self, b1: &EigenBasis, b2: &EigenBasis) -> DMatrix<f64> {
        let (s1, s2) = self.kernel.degrees();
        let psi1 = vandermonde(b1.values());
        let psi2 = vandermonde(b2.values());
        psi1.columns(0, s1 + 1) * self.kernel.coeffs() * psi2.columns(0, s2 + 1).transpose()
    }

    pub fn apply_vertex(&self, z: &DMatrix<f64>, l1: &DMatrix<f64>, l2: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Ok(polynomial_filter_vertex(&Signal2D::new(z.clone())?, &self.kernel, l1, l2)?.into_matrix())
    }

    /// `U1 (h̃ ⊙ U1^T Z U2) U2^T`.
    pub fn apply_spectral(z: &DMatrix<f64>, gain: &DMatrix<f64>, b1: &EigenBasis, b2: &EigenBasis) -> DMatrix<f64> {
        let zhat = b1.vectors.tr_mul(z) * &b2.vectors;
        &b1.vectors * zhat.component_mul(gain) * b2.vectors.transpose()
    }
}

fn check_noise(noise: &WhiteNoise2D, n1: usize, n2: usize) -> Result<()> {
    if noise.shape() != (n1, n2) {
        return Err(Error::dims(
            format!("{n1}x{n2} noise"),
            format!("{}x{}", noise.n1, noise.n2),
        ));
    }
    Ok(())
}

/// `count` samples through the vertex-domain polynomial.
pub fn sample_fgw(
    process: &FgwProcess,
    factor1: &Factor,
    factor2: &Factor,
    noise: &WhiteNoise2D,
    count: usize,
) -> Result<Vec<Signal2D>> {
    FgwProcess::new(process.kernel.clone(), factor1.n(), factor2.n())?;
    check_noise(noise, factor1.n(), factor2.n())?;
    let (l1, l2) = (factor1.laplacian_matrix(), factor2.laplacian_matrix());
    (0..count as u64)
        .into_par_iter()
        .map(|m| Signal2D::new(process.apply_vertex(&noise.sample(m), l1, l2)?))
        .collect()
}

/// Same samples as [`sample_fgw`], produced by spectral gains.
pub fn sample_fgw_spectral(
    process: &FgwProcess,
    factor1: &Factor,
    factor2: &Factor,
    noise: &WhiteNoise2D,
    count: usize,
) -> Result<Vec<Signal2D>> {
    FgwProcess::new(process.kernel.clone(), factor1.n(), factor2.n())?;
    check_noise(noise, factor1.n(), factor2.n())?;
    let (b1, b2) = (&factor1.basis, &factor2.basis);
    let gain = process.spectral_gain(b1, b2);
    (0..count as u64)
        .into_par_iter()
        .map(|m| Signal2D::new(FgwProcess::apply_spectral(&noise.sample(m), &gain, b1, b2)))
        .collect()
}

fn require_distinct(basis: &EigenBasis) -> Result<()> {
    if is_distinct(basis.values(), default_tol_mult(basis.values())) {
        Ok(())
    } else {
        Err(Error::RepeatedEigenvalues)
    }
}

fn inverse_vandermonde(basis: &EigenBasis) -> Result<DMatrix<f64>> {
    require_distinct(basis)?;
    vandermonde(basis.values())
        .try_inverse()
        .ok_or(Error::RepeatedEigenvalues)
}

/// Polynomial process whose spectral variance at `(k1, k2)` is
/// `gamma[(k1, k2)]`: `H = Ψ1⁻¹ √Γ Ψ2⁻ᵀ`.
pub fn construct_h_from_gamma(gamma: &DMatrix<f64>, b1: &EigenBasis, b2: &EigenBasis) -> Result<FgwProcess> {
    let (n1, n2) = (b1.len(), b2.len());
    if gamma.shape() != (n1, n2) {
        return Err(Error::dims(
            format!("{n1}x{n2}"),
            format!("{}x{}", gamma.nrows(), gamma.ncols()),
        ));
    }
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            let v = gamma[(k1, k2)];
            if !v.is_finite() {
                return Err(Error::NonFinite("spectral variance"));
            }
            if v < 0.0 {
                return Err(Error::NegativeVariance { k1, k2, value: v });
            }
        }
    }
    let inv1 = inverse_vandermonde(b1)?;
    let inv2 = inverse_vandermonde(b2)?;
    let coeffs = inv1 * gamma.map(f64::sqrt) * inv2.transpose();
    FgwProcess::new(PolyKernel2D::new(coeffs)?, n1, n2)
}

/// Directionally stationary process.
///
/// * [`Direction::First`]: `X = Σ_s L1^s Z H_s`, `H_s` of size `N2 × N2`.
/// * [`Direction::Second`]: `X = Σ_s H_s Z L2^s`, `H_s` of size `N1 × N1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalProcess {
    direction: Direction,
    coeffs: Vec<DMatrix<f64>>,
}

impl DirectionalProcess {
    /// `(n1, n2)` is the signal shape; at most `n1` (resp. `n2`)
    /// coefficient matrices.
    pub fn new(direction: Direction, coeffs: Vec<DMatrix<f64>>, n1: usize, n2: usize) -> Result<Self> {
        let (max_terms, side) = match direction {
            Direction::First => (n1, n2),
            Direction::Second => (n2, n1),
        };
        if coeffs.is_empty() || coeffs.len() > max_terms {
            return Err(Error::dims(
                format!("1..={max_terms} coefficient matrices"),
                coeffs.len(),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|h| h.shape() != (side, side)) {
            return Err(Error::dims(
                format!("{side}x{side}"),
                format!("{}x{}", bad.nrows(), bad.ncols()),
            ));
        }
        if coeffs.iter().any(|h| h.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite("directional coefficients"));
        }
        Ok(DirectionalProcess { direction, coeffs })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn coeffs(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    /// `l` is the Laplacian of the stationary direction's factor.
    pub fn apply_vertex(&self, z: &DMatrix<f64>, l: &DMatrix<f64>) -> DMatrix<f64> {
        let last = self.coeffs.len() - 1;
        match self.direction {
            Direction::First => {
                let mut acc = z * &self.coeffs[last];
                for h in self.coeffs[..last].iter().rev() {
                    acc = l * acc + z * h;
                }
                acc
            }
            Direction::Second => {
                let mut acc = &self.coeffs[last] * z;
                for h in self.coeffs[..last].iter().rev() {
                    acc = acc * l + h * z;
                }
                acc
            }
        }
    }

    /// `H̃_k = Σ_s λ_k^s H_s` for every eigenvalue of `basis`.
    pub fn half_spectral_gains(&self, basis: &EigenBasis) -> Vec<DMatrix<f64>> {
        basis
            .values()
            .iter()
            .map(|&lambda| {
                let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
                for h in self.coeffs[..self.coeffs.len() - 1].iter().rev() {
                    acc = acc * lambda + h;
                }
                acc
            })
            .collect()
    }

    /// Direction 1: row `k` of `U1^T X` is `(row k of U1^T Z) · H̃_k`.
    /// Direction 2: column `k` of `X U2` is `H̃_k · (column k of Z U2)`.
    pub fn apply_half_spectral(&self, z: &DMatrix<f64>, basis: &EigenBasis, gains: &[DMatrix<f64>]) -> DMatrix<f64> {
        match self.direction {
            Direction::First => {
                let zt = basis.vectors.tr_mul(z);
                let mut xt = DMatrix::zeros(zt.nrows(), zt.ncols());
                for (k, g) in gains.iter().enumerate() {
                    xt.set_row(k, &(zt.row(k) * g));
                }
                &basis.vectors * xt
            }
            Direction::Second => {
                let zt = z * &basis.vectors;
                let mut xt = DMatrix::zeros(zt.nrows(), zt.ncols());
                for (k, g) in gains.iter().enumerate() {
                    xt.set_column(k, &(g * zt.column(k)));
                }
                xt * basis.vectors.transpose()
            }
        }
    }
}

fn check_directional(process: &DirectionalProcess, factor: &Factor, noise: &WhiteNoise2D) -> Result<()> {
    let (n1, n2) = noise.shape();
    DirectionalProcess::new(process.direction, process.coeffs.clone(), n1, n2)?;
    let axis = match process.direction {
        Direction::First => n1,
        Direction::Second => n2,
    };
    if factor.n() != axis {
        return Err(Error::dims(axis, factor.n()));
    }
    Ok(())
}

/// `factor` is the graph along the stationary direction; the noise sets the
/// signal shape.
pub fn sample_directional(
    process: &DirectionalProcess,
    factor: &Factor,
    noise: &WhiteNoise2D,
    count: usize,
) -> Result<Vec<Signal2D>> {
    check_directional(process, factor, noise)?;
    let l = factor.laplacian_matrix();
    (0..count as u64)
        .into_par_iter()
        .map(|m| Signal2D::new(process.apply_vertex(&noise.sample(m), l)))
        .collect()
}

/// Same samples as [`sample_directional`], through half-spectral gains.
pub fn sample_directional_spectral(
    process: &DirectionalProcess,
    factor: &Factor,
    noise: &WhiteNoise2D,
    count: usize,
) -> Result<Vec<Signal2D>> {
    check_directional(process, factor, noise)?;
    let gains = process.half_spectral_gains(&factor.basis);
    (0..count as u64)
        .into_par_iter()
        .map(|m| Signal2D::new(process.apply_half_spectral(&noise.sample(m), &factor.basis, &gains)))
        .collect()
}

/// Per-frequency factor `T` with `T^T T = Γ`, upper triangular when `Γ` is
/// positive definite.
fn gram_root(gamma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if gamma.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("target covariance"));
    }
    let scale = gamma.amax().max(f64::MIN_POSITIVE);
    let deviation = crate::linalg::asymmetry(gamma);
    if deviation > 1e-12 * scale.max(1.0) {
        return Err(Error::Asymmetric { deviation });
    }
    if let Some(ch) = gamma.clone().cholesky() {
        return Ok(ch.l().transpose());
    }
    let eig = gamma.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -1e-10 * scale {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let root = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
}

/// `targets[k]` is the covariance prescribed along the other factor at
/// frequency `k` of `basis` (the stationary direction's factor).
pub fn construct_directional_from_gamma(
    direction: Direction,
    targets: &[DMatrix<f64>],
    basis: &EigenBasis,
) -> Result<DirectionalProcess> {
    let n = basis.len();
    if targets.len() != n {
        return Err(Error::dims(format!("{n} target matrices"), targets.len()));
    }
    let side = targets[0].nrows();
    if let Some(bad) = targets.iter().find(|g| g.shape() != (side, side)) {
        return Err(Error::dims(
            format!("{side}x{side}"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let inv = inverse_vandermonde(basis)?;
    let gains = targets
        .iter()
        .map(|g| {
            let t = gram_root(g)?;
            Ok(match direction {
                Direction::First => t,
                Direction::Second => t.transpose(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<DMatrix<f64>> = (0..n)
        .map(|s| {
            gains
                .iter()
                .enumerate()
                .fold(DMatrix::zeros(side, side), |acc, (k, g)| acc + g * inv[(s, k)])
        })
        .collect();
    let (n1, n2) = match direction {
        Direction::First => (n, side),
        Direction::Second => (side, n),
    };
    DirectionalProcess::new(direction, coeffs, n1, n2)
}

/// `X = Σ_s L^s Z H_s` with `p × p` coefficients; sample rows are vertices.
///
/// Runs the direction-1 sampler on `G □ K̄_p`, so it reproduces
/// [`sample_directional`] exactly for the same noise and coefficients.
pub fn sample_multivariate(
    coeffs: &[DMatrix<f64>],
    factor: &Factor,
    noise: &WhiteNoise2D,
    count: usize,
) -> Result<Vec<SignalMV>> {
    let process = DirectionalProcess::new(Direction::First, coeffs.to_vec(), noise.n1, noise.n2)?;
    sample_directional(&process, factor, noise, count)?
        .into_iter()
        .map(|x| SignalMV::new(x.into_matrix()))
        .collect()
}
