//! Graph Fourier transforms: 1-D, 2-D, n-D, adjacency-based and multivariate.
//!
//! All bases are real orthonormal (eigenvectors of symmetric matrices), so
//! the conjugations in the analysis operator are no-ops. Spectra are still
//! stored as complex values and are addressed by index pair, with the factor
//! eigenvalues carried alongside as annotations.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{real_part_checked, to_complex, C64};
use crate::spectral::{partition_values, BasisSource, EigenBasis};
use crate::{Error, Result};

/// Imaginary residue tolerated when a real signal is expected back.
pub const REAL_TOL: f64 = 1e-10;

/// Real signal on `V1 × V2`; entry `(i1, i2)` is `f(i1, i2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal2D(DMatrix<f64>);

impl Signal2D {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("signal"));
        }
        Ok(Signal2D(values))
    }

    pub fn zeros(n1: usize, n2: usize) -> Self {
        Signal2D(DMatrix::zeros(n1, n2))
    }

    pub fn from_fn(n1: usize, n2: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Signal2D(DMatrix::from_fn(n1, n2, f))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn mean(&self) -> f64 {
        self.0.mean()
    }

    /// Row-major flattening matching the product-graph vertex order.
    pub fn flatten(&self) -> DVector<f64> {
        DVector::from_vec(crate::linalg::flatten(&self.0))
    }

    pub fn from_flat(data: &[f64], n1: usize, n2: usize) -> Result<Self> {
        if data.len() != n1 * n2 {
            return Err(Error::dims(n1 * n2, data.len()));
        }
        Signal2D::new(DMatrix::from_row_slice(n1, n2, data))
    }
}

impl std::ops::Index<(usize, usize)> for Signal2D {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// 2-D spectrum indexed by `(k1, k2)` with eigenvalue annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    pub coeffs: DMatrix<C64>,
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
}

impl Spectrum2D {
    pub fn new(coeffs: DMatrix<C64>, lambda1: Vec<f64>, lambda2: Vec<f64>) -> Result<Self> {
        if coeffs.shape() != (lambda1.len(), lambda2.len()) {
            return Err(Error::dims(
                format!("{}x{}", lambda1.len(), lambda2.len()),
                format!("{}x{}", coeffs.nrows(), coeffs.ncols()),
            ));
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("spectrum"));
        }
        Ok(Spectrum2D {
            coeffs,
            lambda1,
            lambda2,
        })
    }

    pub fn from_real(values: DMatrix<f64>, b1: &EigenBasis, b2: &EigenBasis) -> Result<Self> {
        Spectrum2D::new(to_complex(&values), b1.values().to_vec(), b2.values().to_vec())
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs.shape()
    }

    /// `|f̂(k1, k2)|²`.
    pub fn power(&self) -> DMatrix<f64> {
        self.coeffs.map(|z| z.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn real(&self) -> DMatrix<f64> {
        self.coeffs.map(|z| z.re)
    }

    pub fn imag(&self) -> DMatrix<f64> {
        self.coeffs.map(|z| z.im)
    }
}

/// One group of the eigenvalue-keyed 1-D view of a 2-D spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGroup {
    pub frequency: f64,
    pub power: f64,
    pub members: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumGroup1D {
    pub groups: Vec<FrequencyGroup>,
}

impl SpectrumGroup1D {
    pub fn total_power(&self) -> f64 {
        self.groups.iter().map(|g| g.power).sum()
    }
}

/// `p`-variate signal: row `i` is the sample at vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMV(DMatrix<f64>);

impl SignalMV {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.ncols() == 0 {
            return Err(Error::InvalidParameter("multivariate signal needs p >= 1".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("multivariate signal"));
        }
        Ok(SignalMV(values))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn variates(&self) -> usize {
        self.0.ncols()
    }

    /// The same data viewed as a 2-D signal on `G □ K̄_p`.
    pub fn as_product_signal(&self) -> Signal2D {
        Signal2D(self.0.clone())
    }
}

/// Multivariate spectrum `F̂ = U^H F` with the eigenvalues of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMV {
    pub coeffs: DMatrix<C64>,
    pub lambda: Vec<f64>,
}

fn check_len(basis: &EigenBasis, n: usize) -> Result<()> {
    if basis.len() != n {
        return Err(Error::dims(basis.len(), n));
    }
    Ok(())
}

fn check_shape(f: (usize, usize), b1: &EigenBasis, b2: &EigenBasis) -> Result<()> {
    if f != (b1.len(), b2.len()) {
        return Err(Error::dims(
            format!("{}x{}", b1.len(), b2.len()),
            format!("{}x{}", f.0, f.1),
        ));
    }
    Ok(())
}

/// `f̂(λ_k) = <f, u_k>`, i.e. `U^T f` for a real basis.
pub fn gft_1d(f: &DVector<f64>, basis: &EigenBasis) -> Result<DVector<C64>> {
    check_len(basis, f.len())?;
    let re = basis.vectors.tr_mul(f);
    Ok(re.map(|x| C64::new(x, 0.0)))
}

pub fn inverse_gft_1d(spectrum: &DVector<C64>, basis: &EigenBasis) -> Result<DVector<f64>> {
    check_len(basis, spectrum.len())?;
    let re = &basis.vectors * spectrum.map(|z| z.re);
    let im = &basis.vectors * spectrum.map(|z| z.im);
    let residue = im.amax();
    if residue > REAL_TOL * re.amax().max(1.0) {
        return Err(Error::ComplexResidue(residue));
    }
    Ok(re)
}

fn analysis_2d(f: &DMatrix<f64>, b1: &EigenBasis, b2: &EigenBasis) -> DMatrix<f64> {
    b1.vectors.tr_mul(f) * &b2.vectors
}

fn synthesis_2d(s: &DMatrix<f64>, b1: &EigenBasis, b2: &EigenBasis) -> DMatrix<f64> {
    &b1.vectors * s * b2.vectors.transpose()
}

/// `F̂ = U1^H F conj(U2)`.
pub fn gft_2d(f: &Signal2D, b1: &EigenBasis, b2: &EigenBasis) -> Result<Spectrum2D> {
    check_shape(f.shape(), b1, b2)?;
    Spectrum2D::from_real(analysis_2d(f.matrix(), b1, b2), b1, b2)
}

/// `F = U1 F̂ U2^T`, complex-valued.
pub fn inverse_gft_2d_complex(s: &Spectrum2D, b1: &EigenBasis, b2: &EigenBasis) -> Result<DMatrix<C64>> {
    check_shape(s.shape(), b1, b2)?;
    let re = synthesis_2d(&s.real(), b1, b2);
    let im = synthesis_2d(&s.imag(), b1, b2);
    Ok(DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        C64::new(re[(i, j)], im[(i, j)])
    }))
}

/// Inverse 2-D GFT; fails if the result is not real within [`REAL_TOL`].
pub fn inverse_gft_2d(s: &Spectrum2D, b1: &EigenBasis, b2: &EigenBasis) -> Result<Signal2D> {
    let out = inverse_gft_2d_complex(s, b1, b2)?;
    let scale = out.iter().fold(1.0_f64, |a, z| a.max(z.re.abs()));
    Signal2D::new(real_part_checked(&out, REAL_TOL * scale)?)
}

/// Adjacency-based 2-D GFT. The analysis operator is the adjoint of the
/// synthesis `f = Σ f̂(μ1, μ2) v1 v2`.
pub fn adjacency_gft_2d(f: &Signal2D, w1: &EigenBasis, w2: &EigenBasis) -> Result<Spectrum2D> {
    w1.require(BasisSource::Adjacency)?;
    w2.require(BasisSource::Adjacency)?;
    gft_2d(f, w1, w2)
}

pub fn inverse_adjacency_gft_2d(s: &Spectrum2D, w1: &EigenBasis, w2: &EigenBasis) -> Result<Signal2D> {
    w1.require(BasisSource::Adjacency)?;
    w2.require(BasisSource::Adjacency)?;
    inverse_gft_2d(s, w1, w2)
}

/// Groups entries by the sum frequency `λ1_k1 + λ2_k2` and totals their
/// power. Group powers do not depend on the basis chosen inside degenerate
/// eigenspaces.
pub fn aggregate_to_1d(s: &Spectrum2D, tol_mult: f64) -> Result<SpectrumGroup1D> {
    if tol_mult.is_nan() || tol_mult <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol_mult must be positive, got {tol_mult}"
        )));
    }
    let (n1, n2) = s.shape();
    let pairs: Vec<(usize, usize)> = (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b))).collect();
    let sums: Vec<f64> = pairs.iter().map(|&(a, b)| s.lambda1[a] + s.lambda2[b]).collect();
    let power = s.power();
    let groups = partition_values(&sums, tol_mult)
        .groups
        .into_iter()
        .map(|idx| {
            let frequency = idx.iter().map(|&i| sums[i]).sum::<f64>() / idx.len() as f64;
            let members: Vec<_> = idx.iter().map(|&i| pairs[i]).collect();
            let power = members.iter().map(|&p| power[p]).sum();
            FrequencyGroup {
                frequency,
                power,
                members,
            }
        })
        .collect();
    Ok(SpectrumGroup1D { groups })
}

/// Power per frequency pair `(λ1, λ2)`, grouping each axis by its own
/// multiplicities. Returns `(λ1, λ2, power)` in ascending order.
pub fn aggregate_pairs(s: &Spectrum2D, tol_mult: f64) -> Vec<(f64, f64, f64)> {
    let p1 = partition_values(&s.lambda1, tol_mult);
    let p2 = partition_values(&s.lambda2, tol_mult);
    let power = s.power();
    let mut out = Vec::with_capacity(p1.groups.len() * p2.groups.len());
    for g1 in &p1.groups {
        for g2 in &p2.groups {
            let total = g1
                .iter()
                .flat_map(|&a| g2.iter().map(move |&b| (a, b)))
                .map(|p| power[p])
                .sum();
            out.push((s.lambda1[g1[0]], s.lambda2[g2[0]], total));
        }
    }
    out
}

/// `F̂ = U^H F` for an `N × p` multivariate signal.
pub fn multivariate_gft(f: &SignalMV, basis: &EigenBasis) -> Result<SpectrumMV> {
    check_len(basis, f.matrix().nrows())?;
    Ok(SpectrumMV {
        coeffs: to_complex(&basis.vectors.tr_mul(f.matrix())),
        lambda: basis.values().to_vec(),
    })
}

pub fn inverse_multivariate_gft(s: &SpectrumMV, basis: &EigenBasis) -> Result<SignalMV> {
    check_len(basis, s.coeffs.nrows())?;
    let re = &basis.vectors * s.coeffs.map(|z| z.re);
    let im = &basis.vectors * s.coeffs.map(|z| z.im);
    let residue = im.amax();
    if residue > REAL_TOL * re.amax().max(1.0) {
        return Err(Error::ComplexResidue(residue));
    }
    SignalMV::new(re)
}

/// Real n-way array in row-major order (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct NdSignal {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl NdSignal {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if shape.is_empty() || len != data.len() {
            return Err(Error::dims(format!("{shape:?}"), data.len()));
        }
        Ok(NdSignal { shape, data })
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NdSpectrum {
    pub shape: Vec<usize>,
    pub data: Vec<C64>,
    pub eigenvalues: Vec<Vec<f64>>,
}

impl NdSpectrum {
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Mode-`axis` product: replaces axis `axis` by `op^T x` along it when
/// `transpose` is set, otherwise `op x`.
fn mode_product(data: &[f64], shape: &[usize], axis: usize, op: &DMatrix<f64>, transpose: bool) -> Vec<f64> {
    let n = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; data.len()];
    let mut line = vec![0.0; n];
    for o in 0..outer {
        for i in 0..inner {
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[(o * n + j) * inner + i];
            }
            for k in 0..n {
                let mut acc = 0.0;
                for (j, &x) in line.iter().enumerate() {
                    let a = if transpose { op[(j, k)] } else { op[(k, j)] };
                    acc += a * x;
                }
                out[(o * n + k) * inner + i] = acc;
            }
        }
    }
    out
}

fn check_nd(shape: &[usize], bases: &[&EigenBasis]) -> Result<()> {
    if shape.len() != bases.len() || shape.iter().zip(bases).any(|(&n, b)| n != b.len()) {
        let expected: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        return Err(Error::dims(format!("{expected:?}"), format!("{shape:?}")));
    }
    Ok(())
}

/// n-D GFT on `((G1 □ G2) □ ...) □ Gn`: analysis along every axis, applied
/// left to right.
pub fn gft_nd(f: &NdSignal, bases: &[&EigenBasis]) -> Result<NdSpectrum> {
    check_nd(&f.shape, bases)?;
    let mut data = f.data.clone();
    for (axis, b) in bases.iter().enumerate() {
        data = mode_product(&data, &f.shape, axis, &b.vectors, true);
    }
    Ok(NdSpectrum {
        shape: f.shape.clone(),
        data: data.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        eigenvalues: bases.iter().map(|b| b.values().to_vec()).collect(),
    })
}

pub fn inverse_gft_nd(s: &NdSpectrum, bases: &[&EigenBasis]) -> Result<NdSignal> {
    check_nd(&s.shape, bases)?;
    let mut re: Vec<f64> = s.data.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = s.data.iter().map(|z| z.im).collect();
    for (axis, b) in bases.iter().enumerate() {
        re = mode_product(&re, &s.shape, axis, &b.vectors, false);
        im = mode_product(&im, &s.shape, axis, &b.vectors, false);
    }
    let residue = im.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let scale = re.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    if residue > REAL_TOL * scale {
        return Err(Error::ComplexResidue(residue));
    }
    NdSignal::new(s.shape.clone(), re)
}

/// Flattened 1-D GFT on `G1 □ G2` against the explicitly materialized basis
/// `{u1_k1 ⊗ u2_k2}`. Costs `O(N1² N2²)`; entries come back in the same
/// `(k1, k2)` layout as [`gft_2d`].
///
/// Above 4096 product vertices the basis is materialized one block of `N2`
/// columns at a time to bound memory; the arithmetic is unchanged.
pub fn naive_gft_2d(f: &Signal2D, b1: &EigenBasis, b2: &EigenBasis) -> Result<DMatrix<f64>> {
    check_shape(f.shape(), b1, b2)?;
    let (n1, n2) = f.shape();
    let flat = f.flatten();
    let mut out = DMatrix::zeros(n1, n2);
    if n1 * n2 <= 4096 {
        let basis = b1.vectors.kronecker(&b2.vectors);
        let coeffs = basis.tr_mul(&flat);
        for k1 in 0..n1 {
            for k2 in 0..n2 {
                out[(k1, k2)] = coeffs[n2 * k1 + k2];
            }
        }
        return Ok(out);
    }
    let mut block = DMatrix::zeros(n1 * n2, n2);
    for k1 in 0..n1 {
        for i1 in 0..n1 {
            let a = b1.vectors[(i1, k1)];
            for k2 in 0..n2 {
                for i2 in 0..n2 {
                    block[(n2 * i1 + i2, k2)] = a * b2.vectors[(i2, k2)];
                }
            }
        }
        let coeffs = block.tr_mul(&flat);
        for k2 in 0..n2 {
            out[(k1, k2)] = coeffs[k2];
        }
    }
    Ok(out)
}
