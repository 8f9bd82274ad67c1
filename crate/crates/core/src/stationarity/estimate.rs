use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::{kron, pairwise_reduce, C64};
use crate::spectral::{default_tol_mult, partition_values, EigenBasis};
use crate::transform::{Signal2D, SignalMV};
use crate::variation::Direction;
use crate::{Error, Result};

/// Sample covariance of flattened `N1 × N2` arrays.
///
/// Entry `(N2·k1 + k2, N2·l1 + l2)` is `Cov(x(k1,k2), x(l1,l2))`, estimated
/// with the sample mean removed and `M − 1` normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct CovTensor {
    pub n1: usize,
    pub n2: usize,
    pub samples: usize,
    pub matrix: DMatrix<C64>,
}

impl CovTensor {
    pub fn entry(&self, k1: usize, k2: usize, l1: usize, l2: usize) -> C64 {
        self.matrix[(k1 * self.n2 + k2, l1 * self.n2 + l2)]
    }

    /// Largest `|C[a,b] − conj(C[b,a])|`; zero by construction.
    pub fn hermitian_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut err = 0.0_f64;
        for a in 0..n {
            for b in a..n {
                err = err.max((self.matrix[(a, b)] - self.matrix[(b, a)].conj()).norm());
            }
        }
        err
    }

    /// Real part, checking that the imaginary part is negligible.
    pub fn real(&self) -> Result<DMatrix<f64>> {
        crate::linalg::real_part_checked(
            &self.matrix,
            1e-12 * self.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max),
        )
    }

    /// Diagonal as an `N1 × N2` matrix of variances.
    pub fn variances(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n1, self.n2, |k1, k2| self.entry(k1, k2, k1, k2).re)
    }

    /// Largest `|C[a,b]| / √(C[a,a] C[b,b])` over `a ≠ b`, skipping zero
    /// variances.
    pub fn max_offdiag_correlation(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in (a + 1)..n {
                let denom = (self.matrix[(a, a)].re * self.matrix[(b, b)].re).sqrt();
                if denom > 0.0 {
                    worst = worst.max(self.matrix[(a, b)].norm() / denom);
                }
            }
        }
        worst
    }
}

/// Covariance of complex arrays of a common shape.
pub fn estimate_cov(samples: &[DMatrix<C64>]) -> Result<CovTensor> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: m });
    }
    let (n1, n2) = samples[0].shape();
    if let Some(bad) = samples.iter().find(|s| s.shape() != (n1, n2)) {
        return Err(Error::dims(
            format!("{n1}x{n2}"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let n = n1 * n2;
    let flat = |s: &DMatrix<C64>| -> Vec<C64> { (0..n).map(|v| s[(v / n2, v % n2)]).collect() };

    let zero = || vec![C64::new(0.0, 0.0); n];
    let add = |mut a: Vec<C64>, b: Vec<C64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let sum = pairwise_reduce(
        m,
        &|range: std::ops::Range<usize>| range.fold(zero(), |acc, i| add(acc, flat(&samples[i]))),
        &add,
    );
    let mean: Vec<C64> = sum.iter().map(|z| z / m as f64).collect();

    // upper triangle, row-major
    let tri = n * (n + 1) / 2;
    let upper = |d: &[C64]| -> Vec<C64> {
        let mut out = Vec::with_capacity(tri);
        for a in 0..n {
            for b in a..n {
                out.push(d[a] * d[b].conj());
            }
        }
        out
    };
    let acc = pairwise_reduce(
        m,
        &|range: std::ops::Range<usize>| {
            range.fold(vec![C64::new(0.0, 0.0); tri], |acc, i| {
                let d: Vec<C64> = flat(&samples[i]).iter().zip(&mean).map(|(x, mu)| x - mu).collect();
                add(acc, upper(&d))
            })
        },
        &add,
    );
    let scale = 1.0 / (m - 1) as f64;
    let mut matrix = DMatrix::zeros(n, n);
    let mut it = acc.into_iter();
    for a in 0..n {
        for b in a..n {
            let v = it.next().expect("triangle length") * scale;
            if a == b {
                matrix[(a, a)] = C64::new(v.re, 0.0);
            } else {
                matrix[(a, b)] = v;
                matrix[(b, a)] = v.conj();
            }
        }
    }
    Ok(CovTensor {
        n1,
        n2,
        samples: m,
        matrix,
    })
}

fn to_complex_all(samples: impl Iterator<Item = DMatrix<f64>>) -> Vec<DMatrix<C64>> {
    samples.map(|s| s.map(|v| C64::new(v, 0.0))).collect()
}

/// Vertex-domain covariance `Cov(x)`.
pub fn estimate_vertex_cov(samples: &[Signal2D]) -> Result<CovTensor> {
    estimate_cov(&to_complex_all(samples.iter().map(|s| s.matrix().clone())))
}

/// Covariance of the 2-D spectra `U1^T X U2`.
pub fn estimate_spectral_cov(samples: &[Signal2D], b1: &EigenBasis, b2: &EigenBasis) -> Result<CovTensor> {
    if let Some(s) = samples.first() {
        if s.shape() != (b1.len(), b2.len()) {
            return Err(Error::dims(
                format!("{}x{}", b1.len(), b2.len()),
                format!("{}x{}", s.shape().0, s.shape().1),
            ));
        }
    }
    estimate_cov(&to_complex_all(
        samples.iter().map(|s| b1.vectors.tr_mul(s.matrix()) * &b2.vectors),
    ))
}

/// Outcome of one normalized off-diagonal test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub test: String,
    /// `‖off-diagonal part‖_F / ‖whole‖_F`, in `[0, 1]`.
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub samples: usize,
}

impl DiagnosticReport {
    fn new(test: &str, off: f64, total: f64, threshold: f64, samples: usize) -> Self {
        // a zero covariance is vacuously diagonal
        let statistic = if total > 0.0 {
            (off / total).sqrt().min(1.0)
        } else {
            0.0
        };
        DiagnosticReport {
            test: test.to_string(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            samples,
        }
    }
}

/// Squared off-diagonal and total Frobenius energy of `U^H C U`; entries
/// whose row and column share a label are treated as diagonal.
fn offdiag_energy(c: &DMatrix<C64>, u: &DMatrix<f64>, labels: Option<&[usize]>) -> (f64, f64) {
    let uc = u.map(|v| C64::new(v, 0.0));
    let d = uc.adjoint() * c * &uc;
    let mut off = 0.0;
    let mut total = 0.0;
    for a in 0..d.nrows() {
        for b in 0..d.ncols() {
            let e = d[(a, b)].norm_sqr();
            total += e;
            let same = match labels {
                Some(l) => l[a] == l[b],
                None => a == b,
            };
            if !same {
                off += e;
            }
        }
    }
    (off, total)
}

/// Whether `U` diagonalizes `C`: statistic `‖offdiag(U^H C U)‖_F / ‖C‖_F`.
pub fn test_simdiag(c: &DMatrix<C64>, u: &DMatrix<f64>, tol: f64) -> Result<DiagnosticReport> {
    if c.nrows() != c.ncols() || u.shape() != c.shape() {
        return Err(Error::dims(
            format!("{0}x{0}", c.nrows()),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let (off, total) = offdiag_energy(c, u, None);
    Ok(DiagnosticReport::new("simdiag", off, total, tol, 0))
}

/// Default threshold `5/√M`.
pub fn default_tol(samples: usize) -> f64 {
    5.0 / (samples.max(1) as f64).sqrt()
}

fn check_samples(m: usize, tol: f64) -> Result<()> {
    let needed = (25.0 / (tol * tol) * (1.0 - 1e-12)).ceil();
    if tol.is_nan() || tol <= 0.0 || needed > usize::MAX as f64 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let needed = (needed as usize).max(2);
    if m < needed {
        return Err(Error::InsufficientSamples { needed, got: m });
    }
    Ok(())
}

fn factor_labels(b: &EigenBasis) -> Vec<usize> {
    partition_values(b.values(), default_tol_mult(b.values())).labels()
}

/// Aggregated simultaneous-diagonalization statistic of the vertex-domain
/// slice covariances along one factor: `Cov(x(·,i2), x(·,j2))` against `U1`
/// for [`Direction::First`], `Cov(x(i1,·), x(j1,·))` against `U2` otherwise.
fn slice_simdiag(cov: &CovTensor, direction: Direction, basis: &EigenBasis) -> (f64, f64) {
    let (n1, n2) = (cov.n1, cov.n2);
    let labels = factor_labels(basis);
    let mut off = 0.0;
    let mut total = 0.0;
    match direction {
        Direction::First => {
            for i2 in 0..n2 {
                for j2 in 0..n2 {
                    let c = DMatrix::from_fn(n1, n1, |i1, j1| cov.entry(i1, i2, j1, j2));
                    let (o, t) = offdiag_energy(&c, &basis.vectors, Some(&labels));
                    off += o;
                    total += t;
                }
            }
        }
        Direction::Second => {
            for i1 in 0..n1 {
                for j1 in 0..n1 {
                    let c = DMatrix::from_fn(n2, n2, |i2, j2| cov.entry(i1, i2, j1, j2));
                    let (o, t) = offdiag_energy(&c, &basis.vectors, Some(&labels));
                    off += o;
                    total += t;
                }
            }
        }
    }
    (off, total)
}

/// Off-diagonal energy of a spectral covariance where `is_off(k, l)` selects
/// the entries that must vanish.
fn masked_energy(cov: &CovTensor, is_off: impl Fn((usize, usize), (usize, usize)) -> bool) -> (f64, f64) {
    let (n, n2) = (cov.matrix.nrows(), cov.n2);
    let mut off = 0.0;
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            let e = cov.matrix[(a, b)].norm_sqr();
            total += e;
            if is_off((a / n2, a % n2), (b / n2, b % n2)) {
                off += e;
            }
        }
    }
    (off, total)
}

/// Three equivalent characterizations of factor-graph-wise stationarity,
/// each tested at the same threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FgwStationarityReport {
    /// Slice covariances diagonalized by `U1` and `U2`.
    pub slices: DiagnosticReport,
    /// Spectral covariance vanishes whenever `(k1, k2) ≠ (l1, l2)`.
    pub spectral_full: DiagnosticReport,
    /// Spectral covariance vanishes whenever `k1 ≠ l1` and `k2 ≠ l2`.
    pub spectral_both_differ: DiagnosticReport,
    /// `Cov(x)` diagonalized by the eigenbasis of `L1 ⊕ L2`.
    pub kronecker: DiagnosticReport,
    /// Verdicts of `slices`, `spectral_full` and `kronecker` coincide.
    pub agree: bool,
    /// Largest normalized off-diagonal spectral correlation.
    pub max_spectral_correlation: f64,
}

pub fn test_fgw_stationarity(
    samples: &[Signal2D],
    b1: &EigenBasis,
    b2: &EigenBasis,
    tol: f64,
) -> Result<FgwStationarityReport> {
    let m = samples.len();
    check_samples(m, tol)?;
    let vertex = estimate_vertex_cov(samples)?;
    if (vertex.n1, vertex.n2) != (b1.len(), b2.len()) {
        return Err(Error::dims(
            format!("{}x{}", b1.len(), b2.len()),
            format!("{}x{}", vertex.n1, vertex.n2),
        ));
    }
    let spectral = estimate_spectral_cov(samples, b1, b2)?;
    let (l1, l2) = (factor_labels(b1), factor_labels(b2));

    let (o1, t1) = slice_simdiag(&vertex, Direction::First, b1);
    let (o2, t2) = slice_simdiag(&vertex, Direction::Second, b2);
    let slices = DiagnosticReport::new("slice-simdiag", o1 + o2, t1 + t2, tol, m);

    let (of, tf) = masked_energy(&spectral, |k, l| l1[k.0] != l1[l.0] || l2[k.1] != l2[l.1]);
    let spectral_full = DiagnosticReport::new("spectral-uncorrelated", of, tf, tol, m);
    let (ob, tb) = masked_energy(&spectral, |k, l| l1[k.0] != l1[l.0] && l2[k.1] != l2[l.1]);
    let spectral_both_differ = DiagnosticReport::new("spectral-uncorrelated-both-indices", ob, tb, tol, m);

    let u = kron(&b1.vectors, &b2.vectors);
    let sums: Vec<f64> = (0..b1.len())
        .flat_map(|k1| (0..b2.len()).map(move |k2| b1.values[k1] + b2.values[k2]))
        .collect();
    let sum_labels = partition_values(&sums, default_tol_mult(&sums)).labels();
    let (ok, tk) = offdiag_energy(&vertex.matrix, &u, Some(&sum_labels));
    let kronecker = DiagnosticReport::new("kronecker-sum-simdiag", ok, tk, tol, m);

    let agree = slices.pass == spectral_full.pass && spectral_full.pass == kronecker.pass;
    Ok(FgwStationarityReport {
        max_spectral_correlation: spectral.max_offdiag_correlation(),
        slices,
        spectral_full,
        spectral_both_differ,
        kronecker,
        agree,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalStationarityReport {
    pub direction: Direction,
    /// Slice covariances along the direction diagonalized by its basis.
    pub slices: DiagnosticReport,
    /// Half-spectral covariance vanishes across different frequencies of the
    /// stationary direction.
    pub spectral: DiagnosticReport,
    pub agree: bool,
}

/// `basis` belongs to the factor along `direction`.
pub fn test_directional_stationarity(
    samples: &[Signal2D],
    direction: Direction,
    basis: &EigenBasis,
    tol: f64,
) -> Result<DirectionalStationarityReport> {
    let m = samples.len();
    check_samples(m, tol)?;
    let vertex = estimate_vertex_cov(samples)?;
    let axis = match direction {
        Direction::First => vertex.n1,
        Direction::Second => vertex.n2,
    };
    if basis.len() != axis {
        return Err(Error::dims(axis, basis.len()));
    }
    let labels = factor_labels(basis);
    let (o, t) = slice_simdiag(&vertex, direction, basis);
    let slices = DiagnosticReport::new("slice-simdiag", o, t, tol, m);

    let half = half_spectral_cov(samples, direction, basis)?;
    let (os, ts) = match direction {
        Direction::First => masked_energy(&half, |k, l| labels[k.0] != labels[l.0]),
        Direction::Second => masked_energy(&half, |k, l| labels[k.1] != labels[l.1]),
    };
    let spectral = DiagnosticReport::new("half-spectral-uncorrelated", os, ts, tol, m);
    Ok(DirectionalStationarityReport {
        direction,
        agree: slices.pass == spectral.pass,
        slices,
        spectral,
    })
}

/// Covariance of `U1^T X` (direction 1) or `X U2` (direction 2).
pub fn half_spectral_cov(samples: &[Signal2D], direction: Direction, basis: &EigenBasis) -> Result<CovTensor> {
    estimate_cov(&to_complex_all(samples.iter().map(|s| match direction {
        Direction::First => basis.vectors.tr_mul(s.matrix()),
        Direction::Second => s.matrix() * &basis.vectors,
    })))
}

/// Cross-covariance blocks `Cov(x_a, x_b)` (an `N × N` matrix per variate
/// pair) of multivariate samples, normalized to correlations.
pub fn multivariate_correlation(samples: &[SignalMV]) -> Result<Vec<Vec<DMatrix<f64>>>> {
    let cov = estimate_cov(&to_complex_all(samples.iter().map(|s| s.matrix().clone())))?.real()?;
    let Some(first) = samples.first() else {
        return Err(Error::InsufficientSamples { needed: 2, got: 0 });
    };
    let (n, p) = first.matrix().shape();
    let idx = |i: usize, a: usize| i * p + a;
    Ok((0..p)
        .map(|a| {
            (0..p)
                .map(|b| {
                    DMatrix::from_fn(n, n, |i, j| {
                        let denom = (cov[(idx(i, a), idx(i, a))] * cov[(idx(j, b), idx(j, b))]).sqrt();
                        if denom > 0.0 {
                            cov[(idx(i, a), idx(j, b))] / denom
                        } else {
                            0.0
                        }
                    })
                })
                .collect()
        })
        .collect())
}

/// Largest deviation of `c` from its average along each cyclic diagonal
/// `(j − i) mod N`; zero exactly when `c` is circulant.
pub fn circulant_residual(c: &DMatrix<f64>) -> f64 {
    let n = c.nrows();
    let means: Vec<f64> = (0..n)
        .map(|shift| (0..n).map(|i| c[(i, (i + shift) % n)]).sum::<f64>() / n as f64)
        .collect();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((c[(i, j)] - means[(j + n - i) % n]).abs());
        }
    }
    worst
}
