//! Shared fixtures for the criterion benchmarks.

use mdgsp::{Factor, Graph, GraphKind, Signal2D};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub factor1: Factor,
    pub factor2: Factor,
    pub signal: Signal2D,
}

/// `P_n1 □ C_n2` with a uniform random signal in `[-0.5, 0.5)`.
pub fn fixture(n1: usize, n2: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = Graph::standard(GraphKind::Path, n1).expect("path size");
    let g2 = Graph::standard(GraphKind::Cycle, n2.max(3)).expect("cycle size");
    let values = DMatrix::from_fn(n1, n2.max(3), |_, _| rng.random::<f64>() - 0.5);
    Fixture {
        factor1: Factor::laplacian(&g1).expect("factor 1"),
        factor2: Factor::laplacian(&g2).expect("factor 2"),
        signal: Signal2D::new(values).expect("finite signal"),
    }
}
