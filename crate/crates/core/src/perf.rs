//! Timing of the separable 2-D transform against the flattened transform
//! with a materialized product basis.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{cartesian_product, Graph, GraphKind};
use crate::spectral::{eigenbasis, BasisSource, Factor};
use crate::transform::{aggregate_to_1d, gft_2d, naive_gft_2d, Signal2D, Spectrum2D};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub repetitions: usize,
    /// Skip the naive path above this many product vertices.
    pub naive_max_vertices: Option<usize>,
    /// Time the eigendecomposition of the full product Laplacian up to this
    /// many vertices.
    pub product_eig_max_vertices: usize,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repetitions: 5,
            naive_max_vertices: None,
            product_eig_max_vertices: 1024,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeTiming {
    pub n1: usize,
    pub n2: usize,
    /// Eigendecomposition of both factor Laplacians.
    pub factor_setup_secs: f64,
    /// Eigendecomposition of the product Laplacian, when small enough.
    pub product_setup_secs: Option<f64>,
    pub fast_secs: f64,
    pub naive_secs: Option<f64>,
    /// Naive time over fast time.
    pub speedup: Option<f64>,
    /// Largest relative difference between sum-frequency group powers of
    /// the two paths.
    pub group_power_rel_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub repetitions: usize,
    pub sizes: Vec<SizeTiming>,
    /// Slope of `log(fast time)` against `log(N1² N2 + N1 N2²)`; 1 means the
    /// predicted scaling.
    pub fast_scaling_slope: Option<f64>,
}

/// Largest number of `f64` entries one size may allocate (2 GiB).
const MAX_ELEMENTS: usize = 1 << 28;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn time<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `N1² N2 + N1 N2²`.
pub fn fast_cost(n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    a * a * b + a * b * b
}

fn max_group_rel_diff(a: &Spectrum2D, b: &Spectrum2D) -> Result<f64> {
    let ga = aggregate_to_1d(a, 1e-8)?;
    let gb = aggregate_to_1d(b, 1e-8)?;
    if ga.groups.len() != gb.groups.len() {
        return Ok(f64::INFINITY);
    }
    let scale = ga.total_power().max(f64::MIN_POSITIVE);
    Ok(ga
        .groups
        .iter()
        .zip(&gb.groups)
        .map(|(x, y)| (x.power - y.power).abs() / scale)
        .fold(0.0, f64::max))
}

/// Time both paths on `P_N1 □ P_N2` with a seeded random signal.
pub fn bench_transforms(sizes: &[(usize, usize)], options: &BenchOptions) -> Result<BenchReport> {
    if options.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut out = Vec::with_capacity(sizes.len());
    for &(n1, n2) in sizes {
        let n = n1
            .checked_mul(n2)
            .ok_or_else(|| Error::TooLarge(format!("{n1}x{n2}")))?;
        let elements = n1
            .checked_mul(n1)
            .zip(n2.checked_mul(n2))
            .and_then(|(a, b)| a.checked_add(b)?.checked_add(n.checked_mul(4)?));
        if elements.is_none_or(|e| e > MAX_ELEMENTS) {
            return Err(Error::TooLarge(format!("{n1}x{n2} exceeds the benchmark memory bound")));
        }
        let g1 = Graph::standard(GraphKind::Path, n1)?;
        let g2 = Graph::standard(GraphKind::Path, n2)?;
        let ((f1, f2), factor_setup_secs) = time(|| (Factor::laplacian(&g1), Factor::laplacian(&g2)));
        let (f1, f2) = (f1?, f2?);
        let product_setup_secs = if n <= options.product_eig_max_vertices {
            let l = cartesian_product(&g1, &g2).kronecker_laplacian();
            let (b, secs) = time(|| eigenbasis(&l, BasisSource::Laplacian));
            b?;
            Some(secs)
        } else {
            None
        };
        let signal = Signal2D::new(DMatrix::from_fn(n1, n2, |_, _| rng.random::<f64>() - 0.5))?;

        let mut fast = Vec::with_capacity(options.repetitions);
        let mut fast_spec = None;
        for _ in 0..options.repetitions {
            let (s, secs) = time(|| gft_2d(&signal, &f1.basis, &f2.basis));
            fast_spec = Some(s?);
            fast.push(secs);
        }
        let fast_secs = median(fast);

        let run_naive = options.naive_max_vertices.is_none_or(|cap| n <= cap);
        let (naive_secs, group_power_rel_diff) = if run_naive {
            let mut naive = Vec::with_capacity(options.repetitions);
            let mut naive_coeffs = None;
            for _ in 0..options.repetitions {
                let (c, secs) = time(|| naive_gft_2d(&signal, &f1.basis, &f2.basis));
                naive_coeffs = Some(c?);
                naive.push(secs);
            }
            let naive_spec =
                Spectrum2D::from_real(naive_coeffs.expect("at least one repetition"), &f1.basis, &f2.basis)?;
            let diff = max_group_rel_diff(fast_spec.as_ref().expect("at least one repetition"), &naive_spec)?;
            (Some(median(naive)), Some(diff))
        } else {
            (None, None)
        };
        out.push(SizeTiming {
            n1,
            n2,
            factor_setup_secs,
            product_setup_secs,
            fast_secs,
            naive_secs,
            speedup: naive_secs.map(|t| t / fast_secs),
            group_power_rel_diff,
        });
    }
    let costs: Vec<f64> = out.iter().map(|t| fast_cost(t.n1, t.n2)).collect();
    let times: Vec<f64> = out.iter().map(|t| t.fast_secs).collect();
    Ok(BenchReport {
        repetitions: options.repetitions,
        fast_scaling_slope: loglog_slope(&costs, &times),
        sizes: out,
    })
}
