//! Energy-model denoising on product graphs.
//!
//! The energy of a candidate `x` given an observation `y` is
//!
//! ```text
//! ‖x − y‖_p^p + γ1/2 Σ_{i1,j1} w1(i1,j1) ‖x(i1,·) − x(j1,·)‖_{q1}^{q1}
//!             + γ2/2 Σ_{i2,j2} w2(i2,j2) ‖x(·,i2) − x(·,j2)‖_{q2}^{q2}
//! ```
//!
//! With all exponents equal to 2 the minimizer is diagonal in the 2-D GFT
//! basis. Other exponents fall back to first-order descent.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::linalg::C64;
use crate::spectral::Factor;
use crate::transform::{gft_2d, inverse_gft_2d, Signal2D};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EbemParams {
    pub p: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub q1: f64,
    pub q2: f64,
}

impl EbemParams {
    /// Same weight and exponent along both factors.
    pub fn isotropic(p: f64, gamma: f64, q: f64) -> Self {
        EbemParams {
            p,
            gamma1: gamma,
            gamma2: gamma,
            q1: q,
            q2: q,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q1", self.q1), ("q2", self.q2)] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a finite number >= 1, got {v}"
                )));
            }
        }
        for (name, v) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_quadratic(&self) -> bool {
        self.p == 2.0 && self.q1 == 2.0 && self.q2 == 2.0
    }

    fn is_smooth(&self) -> bool {
        self.p > 1.0 && (self.q1 > 1.0 || self.gamma1 == 0.0) && (self.q2 > 1.0 || self.gamma2 == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Stop once the relative energy decrease per iteration falls below this.
    pub tol: f64,
    /// Use descent even when the closed form applies.
    pub force_iterative: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iter: 100_000,
            tol: 1e-10,
            force_iterative: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    ClosedForm,
    Gradient,
    Subgradient,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub minimizer: Signal2D,
    pub energy: f64,
    pub observation_energy: f64,
    pub iterations: usize,
    /// Final relative energy decrease.
    pub residual: f64,
    pub method: SolveMethod,
    pub converged: bool,
    /// Heuristic: the energy is flat along some probe direction at the
    /// minimizer, so other minimizers may exist.
    pub possibly_nonunique: bool,
}

fn check_pair(x: &Signal2D, y: &Signal2D) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::dims(
            format!("{}x{}", y.shape().0, y.shape().1),
            format!("{}x{}", x.shape().0, x.shape().1),
        ));
    }
    Ok(())
}

fn check_graphs(x: &Signal2D, g1: &Graph, g2: &Graph) -> Result<()> {
    let (n1, n2) = x.shape();
    if (g1.n(), g2.n()) != (n1, n2) {
        return Err(Error::dims(format!("{n1}x{n2}"), format!("{}x{}", g1.n(), g2.n())));
    }
    Ok(())
}

// The ordered-pair double sum counts every edge twice, cancelling the ½.
fn regularizer_rows(x: &DMatrix<f64>, g1: &Graph, q: f64) -> f64 {
    g1.edges()
        .iter()
        .map(|&(a, b, w)| {
            w * (0..x.ncols())
                .map(|c| (x[(a, c)] - x[(b, c)]).abs().powf(q))
                .sum::<f64>()
        })
        .sum()
}

fn regularizer_cols(x: &DMatrix<f64>, g2: &Graph, q: f64) -> f64 {
    g2.edges()
        .iter()
        .map(|&(a, b, w)| {
            w * (0..x.nrows())
                .map(|r| (x[(r, a)] - x[(r, b)]).abs().powf(q))
                .sum::<f64>()
        })
        .sum()
}

fn energy_unchecked(x: &DMatrix<f64>, y: &DMatrix<f64>, params: &EbemParams, g1: &Graph, g2: &Graph) -> f64 {
    let fidelity: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs().powf(params.p)).sum();
    let mut e = fidelity;
    if params.gamma1 != 0.0 {
        e += params.gamma1 * regularizer_rows(x, g1, params.q1);
    }
    if params.gamma2 != 0.0 {
        e += params.gamma2 * regularizer_cols(x, g2, params.q2);
    }
    e
}

pub fn ebem_energy(x: &Signal2D, y: &Signal2D, params: &EbemParams, g1: &Graph, g2: &Graph) -> Result<f64> {
    params.validate()?;
    check_pair(x, y)?;
    check_graphs(x, g1, g2)?;
    Ok(energy_unchecked(x.matrix(), y.matrix(), params, g1, g2))
}

/// `‖x − y‖_p^p + γ/2 Σ_{i,j} w(i,j) |x(i) − x(j)|^q` on a single graph.
pub fn ebem_energy_1d(x: &DVector<f64>, y: &DVector<f64>, p: f64, gamma: f64, q: f64, g: &Graph) -> Result<f64> {
    EbemParams::isotropic(p, gamma, q).validate()?;
    if x.len() != y.len() || x.len() != g.n() {
        return Err(Error::dims(g.n(), format!("{} and {}", x.len(), y.len())));
    }
    let fidelity: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs().powf(p)).sum();
    let reg: f64 = g.edges().iter().map(|&(a, b, w)| w * (x[a] - x[b]).abs().powf(q)).sum();
    Ok(fidelity + gamma * reg)
}

fn dpow(d: f64, q: f64) -> f64 {
    // derivative of |d|^q, with 0 as the subgradient at d = 0
    if d == 0.0 {
        0.0
    } else {
        q * d.abs().powf(q - 1.0) * d.signum()
    }
}

fn gradient(x: &DMatrix<f64>, y: &DMatrix<f64>, params: &EbemParams, g1: &Graph, g2: &Graph) -> DMatrix<f64> {
    let mut g = x.zip_map(y, |a, b| dpow(a - b, params.p));
    if params.gamma1 != 0.0 {
        for &(a, b, w) in g1.edges() {
            for c in 0..x.ncols() {
                let t = params.gamma1 * w * dpow(x[(a, c)] - x[(b, c)], params.q1);
                g[(a, c)] += t;
                g[(b, c)] -= t;
            }
        }
    }
    if params.gamma2 != 0.0 {
        for &(a, b, w) in g2.edges() {
            for r in 0..x.nrows() {
                let t = params.gamma2 * w * dpow(x[(r, a)] - x[(r, b)], params.q2);
                g[(r, a)] += t;
                g[(r, b)] -= t;
            }
        }
    }
    g
}

/// Minimize the energy for observation `y` on `factor1 □ factor2`.
pub fn ebem_minimize(
    y: &Signal2D,
    params: &EbemParams,
    factor1: &Factor,
    factor2: &Factor,
    options: &SolverOptions,
) -> Result<SolveReport> {
    params.validate()?;
    check_graphs(y, &factor1.graph, &factor2.graph)?;
    if options.tol <= 0.0 || options.max_iter == 0 {
        return Err(Error::InvalidParameter("solver needs tol > 0 and max_iter > 0".into()));
    }
    let (g1, g2) = (&factor1.graph, &factor2.graph);
    let observation_energy = energy_unchecked(y.matrix(), y.matrix(), params, g1, g2);

    if params.is_quadratic() && !options.force_iterative {
        let x = closed_form(y, params, factor1, factor2)?;
        let energy = energy_unchecked(x.matrix(), y.matrix(), params, g1, g2);
        return Ok(SolveReport {
            minimizer: x,
            energy,
            observation_energy,
            iterations: 0,
            residual: 0.0,
            method: SolveMethod::ClosedForm,
            converged: true,
            possibly_nonunique: false,
        });
    }

    let mut report = if params.is_smooth() {
        gradient_descent(y, params, g1, g2, options)
    } else {
        subgradient_descent(y, params, g1, g2, options)
    };
    report.observation_energy = observation_energy;
    report.possibly_nonunique = !params.is_smooth() && flat_at(&report.minimizer, y, params, g1, g2);
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NotConverged(Box::new(report)))
    }
}

/// `x̂(k1, k2) = ŷ(k1, k2) / (1 + γ1 λ1_k1 + γ2 λ2_k2)`.
pub fn closed_form(y: &Signal2D, params: &EbemParams, factor1: &Factor, factor2: &Factor) -> Result<Signal2D> {
    let mut spec = gft_2d(y, &factor1.basis, &factor2.basis)?;
    let (l1, l2) = (spec.lambda1.clone(), spec.lambda2.clone());
    for (a, &la) in l1.iter().enumerate() {
        for (b, &lb) in l2.iter().enumerate() {
            let denom = 1.0 + params.gamma1 * la + params.gamma2 * lb;
            spec.coeffs[(a, b)] /= C64::new(denom, 0.0);
        }
    }
    inverse_gft_2d(&spec, &factor1.basis, &factor2.basis)
}

fn gradient_descent(y: &Signal2D, params: &EbemParams, g1: &Graph, g2: &Graph, options: &SolverOptions) -> SolveReport {
    const ARMIJO: f64 = 1e-4;
    let ym = y.matrix();
    let mut x = ym.clone();
    let mut energy = energy_unchecked(&x, ym, params, g1, g2);
    let mut step = 1.0 / (1.0 + 2.0 * (params.gamma1 * max_degree(g1) + params.gamma2 * max_degree(g2)));
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < options.max_iter {
        iterations += 1;
        let grad = gradient(&x, ym, params, g1, g2);
        let gnorm2 = grad.norm_squared();
        if gnorm2 == 0.0 {
            residual = 0.0;
            converged = true;
            break;
        }
        step *= 2.0;
        let (next, next_energy) = loop {
            let cand = &x - &grad * step;
            let e = energy_unchecked(&cand, ym, params, g1, g2);
            if e <= energy - ARMIJO * step * gnorm2 {
                break (Some(cand), e);
            }
            step *= 0.5;
            if step < 1e-300 {
                break (None, energy);
            }
        };
        let Some(next) = next else {
            // no representable descent step left
            residual = 0.0;
            converged = true;
            break;
        };
        assert!(next_energy <= energy, "energy increased during backtracking descent");
        residual = (energy - next_energy) / energy.max(f64::MIN_POSITIVE);
        x = next;
        energy = next_energy;
        if residual < options.tol {
            converged = true;
            break;
        }
    }
    SolveReport {
        minimizer: Signal2D::new(x).expect("descent iterates stay finite"),
        energy,
        observation_energy: 0.0,
        iterations,
        residual,
        method: SolveMethod::Gradient,
        converged,
        possibly_nonunique: false,
    }
}

/// Normalized subgradient steps of size `r / √k`; the best iterate is kept.
/// When the best energy stalls over a window of `WINDOW` iterations, `r` is
/// halved and `k` restarts from the best iterate.
fn subgradient_descent(
    y: &Signal2D,
    params: &EbemParams,
    g1: &Graph,
    g2: &Graph,
    options: &SolverOptions,
) -> SolveReport {
    const WINDOW: usize = 500;
    // Radius halvings before the step is considered negligible.
    const HALVINGS: u32 = 20;
    let ym = y.matrix();
    let spread = ym.max() - ym.min();
    let mut radius = 0.5 * spread.max(1e-3) * (ym.len() as f64).sqrt();
    let mut x = ym.clone();
    let mut best = x.clone();
    let mut best_energy = energy_unchecked(&x, ym, params, g1, g2);
    let mut window_start = best_energy;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut since_restart = 0usize;
    let mut halvings = 0;
    let mut converged = false;

    while iterations < options.max_iter {
        let grad = gradient(&x, ym, params, g1, g2);
        let gnorm = grad.norm();
        iterations += 1;
        since_restart += 1;
        if gnorm == 0.0 {
            residual = 0.0;
            converged = true;
            break;
        }
        let step = radius / ((since_restart as f64).sqrt() * gnorm);
        x -= grad * step;
        let e = energy_unchecked(&x, ym, params, g1, g2);
        if e < best_energy {
            best_energy = e;
            best.copy_from(&x);
        }
        if since_restart % WINDOW == 0 {
            residual = (window_start - best_energy) / (WINDOW as f64 * window_start.max(f64::MIN_POSITIVE));
            window_start = best_energy;
            if residual < options.tol {
                // stalled at this step scale: shrink it and restart from the best point
                halvings += 1;
                if halvings >= HALVINGS {
                    converged = true;
                    break;
                }
                radius *= 0.5;
                since_restart = 0;
                x.copy_from(&best);
            }
        }
    }
    SolveReport {
        minimizer: Signal2D::new(best).expect("descent iterates stay finite"),
        energy: best_energy,
        observation_energy: 0.0,
        iterations,
        residual,
        method: SolveMethod::Subgradient,
        converged,
        possibly_nonunique: false,
    }
}

fn max_degree(g: &Graph) -> f64 {
    (0..g.n()).map(|i| g.degree(i)).fold(0.0, f64::max)
}

fn flat_at(x: &Signal2D, y: &Signal2D, params: &EbemParams, g1: &Graph, g2: &Graph) -> bool {
    let xm = x.matrix();
    let e0 = energy_unchecked(xm, y.matrix(), params, g1, g2);
    let delta = 1e-6 * xm.amax().max(1.0);
    let flat_tol = 1e-9 * e0.max(1.0);
    let (n1, n2) = xm.shape();
    let mut probes = vec![DMatrix::from_element(n1, n2, 1.0)];
    if n1 * n2 <= 1024 {
        for v in 0..n1 * n2 {
            let mut d = DMatrix::zeros(n1, n2);
            d[(v / n2, v % n2)] = 1.0;
            probes.push(d);
        }
    }
    probes.iter().any(|d| {
        let plus = energy_unchecked(&(xm + d * delta), y.matrix(), params, g1, g2);
        let minus = energy_unchecked(&(xm - d * delta), y.matrix(), params, g1, g2);
        (plus - e0).abs() <= flat_tol && (minus - e0).abs() <= flat_tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use crate::linalg::{kron, max_abs_diff};
    use crate::variation::{total_directional_variation, Direction};

    fn factor(kind: GraphKind, n: usize) -> Factor {
        Factor::laplacian(&Graph::standard(kind, n).unwrap()).unwrap()
    }

    fn observation(n1: usize, n2: usize) -> Signal2D {
        Signal2D::from_fn(n1, n2, |a, b| {
            ((a * 5 + b * 11) % 7) as f64 * 0.3 - 0.8 + (a as f64).sin()
        })
    }

    #[test]
    fn energy_trivial_cases() {
        let (f1, f2) = (factor(GraphKind::Path, 3), factor(GraphKind::Cycle, 4));
        let c = Signal2D::from_fn(3, 4, |_, _| 1.5);
        let params = EbemParams::isotropic(2.0, 3.0, 2.0);
        assert_eq!(ebem_energy(&c, &c, &params, &f1.graph, &f2.graph).unwrap(), 0.0);

        let y = observation(3, 4);
        let x = Signal2D::zeros(3, 4);
        let off = EbemParams {
            p: 1.5,
            gamma1: 0.0,
            gamma2: 0.0,
            q1: 2.0,
            q2: 1.0,
        };
        let e = ebem_energy(&x, &y, &off, &f1.graph, &f2.graph).unwrap();
        let direct: f64 = y.matrix().iter().map(|v| v.abs().powf(1.5)).sum();
        assert!((e - direct).abs() < 1e-12);
    }

    #[test]
    fn quadratic_energy_matches_variations() {
        let (f1, f2) = (factor(GraphKind::Path, 4), factor(GraphKind::Wheel, 5));
        let x = observation(4, 5);
        let y = Signal2D::zeros(4, 5);
        let params = EbemParams {
            p: 2.0,
            gamma1: 0.3,
            gamma2: 1.1,
            q1: 2.0,
            q2: 2.0,
        };
        let e = ebem_energy(&x, &y, &params, &f1.graph, &f2.graph).unwrap();
        let s1 = total_directional_variation(&x, Direction::First, &f1).unwrap().total;
        let s2 = total_directional_variation(&x, Direction::Second, &f2).unwrap().total;
        let expect = x.norm().powi(2) + params.gamma1 * s1 + params.gamma2 * s2;
        assert!((e - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn isotropic_matches_product_graph_energy() {
        let (f1, f2) = (factor(GraphKind::Path, 3), factor(GraphKind::Path, 4));
        let pg = crate::graph::cartesian_product(&f1.graph, &f2.graph);
        let x = observation(3, 4);
        let y = Signal2D::from_fn(3, 4, |a, b| (a + b) as f64 * 0.1);
        for (p, gamma, q) in [(2.0, 0.7, 2.0), (1.0, 0.2, 1.5), (1.3, 2.0, 1.0)] {
            let e2 = ebem_energy(&x, &y, &EbemParams::isotropic(p, gamma, q), &f1.graph, &f2.graph).unwrap();
            let e1 = ebem_energy_1d(&x.flatten(), &y.flatten(), p, gamma, q, &pg.graph).unwrap();
            assert!((e1 - e2).abs() < 1e-10 * e1.max(1.0));
        }
    }

    #[test]
    fn closed_form_matches_dense_solve() {
        let (f1, f2) = (factor(GraphKind::Path, 4), factor(GraphKind::Path, 5));
        let y = observation(4, 5);
        let params = EbemParams {
            p: 2.0,
            gamma1: 0.3,
            gamma2: 1.1,
            q1: 2.0,
            q2: 2.0,
        };
        let r = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        assert_eq!(r.method, SolveMethod::ClosedForm);
        let system = DMatrix::identity(20, 20)
            + kron(f1.laplacian_matrix(), &DMatrix::identity(5, 5)) * params.gamma1
            + kron(&DMatrix::identity(4, 4), f2.laplacian_matrix()) * params.gamma2;
        let x = system.lu().solve(&y.flatten()).unwrap();
        let dense = Signal2D::from_flat(x.as_slice(), 4, 5).unwrap();
        assert!(max_abs_diff(dense.matrix(), r.minimizer.matrix()) < 1e-10);
        assert!(r.energy <= r.observation_energy + 1e-12);
    }

    #[test]
    fn zero_gamma_returns_observation() {
        let (f1, f2) = (factor(GraphKind::Path, 3), factor(GraphKind::Path, 3));
        let y = observation(3, 3);
        let params = EbemParams {
            p: 2.0,
            gamma1: 0.0,
            gamma2: 0.0,
            q1: 2.0,
            q2: 2.0,
        };
        let r = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        assert!(max_abs_diff(r.minimizer.matrix(), y.matrix()) < 1e-12);
    }

    #[test]
    fn forced_gradient_reaches_closed_form_energy() {
        let (f1, f2) = (factor(GraphKind::Path, 4), factor(GraphKind::Path, 5));
        let y = observation(4, 5);
        let params = EbemParams {
            p: 2.0,
            gamma1: 0.3,
            gamma2: 1.1,
            q1: 2.0,
            q2: 2.0,
        };
        let exact = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        let opts = SolverOptions {
            force_iterative: true,
            ..Default::default()
        };
        let iter = ebem_minimize(&y, &params, &f1, &f2, &opts).unwrap();
        assert_eq!(iter.method, SolveMethod::Gradient);
        assert!((iter.energy - exact.energy).abs() <= 1e-4 * exact.energy);
    }

    #[test]
    fn nonsmooth_exponents_descend() {
        let (f1, f2) = (factor(GraphKind::Path, 3), factor(GraphKind::Cycle, 4));
        let y = observation(3, 4);
        let params = EbemParams {
            p: 2.0,
            gamma1: 0.5,
            gamma2: 0.5,
            q1: 1.0,
            q2: 1.0,
        };
        let r = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        assert_eq!(r.method, SolveMethod::Subgradient);
        assert!(r.energy < r.observation_energy);
        let smooth = EbemParams {
            p: 1.5,
            gamma1: 0.5,
            gamma2: 0.5,
            q1: 1.5,
            q2: 3.0,
        };
        let s = ebem_minimize(&y, &smooth, &f1, &f2, &SolverOptions::default()).unwrap();
        assert_eq!(s.method, SolveMethod::Gradient);
        assert!(s.energy <= s.observation_energy);
    }

    #[test]
    fn large_gamma_gives_mean() {
        let (f1, f2) = (factor(GraphKind::Path, 4), factor(GraphKind::Cycle, 5));
        let y = observation(4, 5);
        let params = EbemParams::isotropic(2.0, 1e6, 2.0);
        let r = ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).unwrap();
        let mean = y.mean();
        assert!(r.minimizer.matrix().iter().all(|v| (v - mean).abs() < 1e-4));
    }

    #[test]
    fn rejects_bad_parameters() {
        let (f1, f2) = (factor(GraphKind::Path, 3), factor(GraphKind::Path, 3));
        let y = observation(3, 3);
        for params in [
            EbemParams::isotropic(0.5, 1.0, 2.0),
            EbemParams::isotropic(2.0, -1.0, 2.0),
            EbemParams::isotropic(2.0, 1.0, 0.9),
        ] {
            assert!(ebem_minimize(&y, &params, &f1, &f2, &SolverOptions::default()).is_err());
        }
        let wrong = observation(3, 4);
        assert!(ebem_minimize(
            &wrong,
            &EbemParams::isotropic(2.0, 1.0, 2.0),
            &f1,
            &f2,
            &SolverOptions::default()
        )
        .is_err());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let (f1, f2) = (factor(GraphKind::Path, 4), factor(GraphKind::Path, 4));
        let y = observation(4, 4);
        let params = EbemParams::isotropic(1.2, 5.0, 1.7);
        let opts = SolverOptions {
            max_iter: 2,
            ..Default::default()
        };
        match ebem_minimize(&y, &params, &f1, &f2, &opts) {
            Err(Error::NotConverged(r)) => assert_eq!(r.iterations, 2),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
