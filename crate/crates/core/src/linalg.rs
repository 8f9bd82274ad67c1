//! Small dense helpers shared by the transform, filtering and stationarity code.

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Kronecker sum `a ⊕ b = a ⊗ I + I ⊗ b` for square `a`, `b`.
pub fn kron_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let ia = DMatrix::<f64>::identity(a.nrows(), a.nrows());
    let ib = DMatrix::<f64>::identity(b.nrows(), b.nrows());
    kron(a, &ib) + kron(&ia, b)
}

/// Row-major flattening `(i1, i2) -> N2*i1 + i2`.
pub fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn unflatten(data: &[f64], rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, data)
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Splits a complex matrix into its real part, checking that the imaginary
/// part is below `tol` in max-norm.
pub fn real_part_checked(m: &DMatrix<C64>, tol: f64) -> crate::Result<DMatrix<f64>> {
    let residue = m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    if residue > tol {
        return Err(crate::Error::ComplexResidue(residue));
    }
    Ok(m.map(|z| z.re))
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Max deviation from symmetry, `max |m_ij - m_ji|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

/// `m^0, m^1, ..., m^degree` by repeated multiplication.
pub fn matrix_powers(m: &DMatrix<f64>, degree: usize) -> Vec<DMatrix<f64>> {
    let n = m.nrows();
    let mut powers = Vec::with_capacity(degree + 1);
    powers.push(DMatrix::identity(n, n));
    for s in 1..=degree {
        let next = &powers[s - 1] * m;
        powers.push(next);
    }
    powers
}

/// Deterministic pairwise (fixed-tree) sum over `0..len`, leaves folded
/// sequentially. Split points depend only on `len`, so the result is
/// bit-reproducible regardless of thread scheduling.
pub fn pairwise_reduce<T, L, C>(len: usize, leaf: &L, combine: &C) -> T
where
    T: Send,
    L: Fn(std::ops::Range<usize>) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    fn go<T: Send, L, C>(range: std::ops::Range<usize>, leaf: &L, combine: &C) -> T
    where
        L: Fn(std::ops::Range<usize>) -> T + Sync,
        C: Fn(T, T) -> T + Sync,
    {
        const LEAF: usize = 256;
        if range.len() <= LEAF {
            return leaf(range);
        }
        let mid = range.start + range.len() / 2;
        let (a, b) = rayon::join(
            || go(range.start..mid, leaf, combine),
            || go(mid..range.end, leaf, combine),
        );
        combine(a, b)
    }
    go(0..len, leaf, combine)
}
