use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    #[default]
    Gaussian,
    /// Independent ±1 entries.
    Rademacher,
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(NoiseKind::Gaussian),
            "rademacher" => Ok(NoiseKind::Rademacher),
            _ => Err(Error::InvalidParameter(format!("unknown noise kind `{s}`"))),
        }
    }
}

/// Seeded source of `N1 × N2` white-noise matrices.
///
/// Sample `m` is drawn from its own ChaCha stream (`seed`, stream `m`), so
/// any subset of samples can be regenerated independently and in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhiteNoise2D {
    pub n1: usize,
    pub n2: usize,
    pub seed: u64,
    pub kind: NoiseKind,
}

impl WhiteNoise2D {
    pub fn new(n1: usize, n2: usize, seed: u64) -> Self {
        WhiteNoise2D {
            n1,
            n2,
            seed,
            kind: NoiseKind::Gaussian,
        }
    }

    pub fn with_kind(self, kind: NoiseKind) -> Self {
        WhiteNoise2D { kind, ..self }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    /// Entries are filled in row-major order.
    pub fn sample(&self, index: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut z = DMatrix::zeros(self.n1, self.n2);
        for i1 in 0..self.n1 {
            for i2 in 0..self.n2 {
                z[(i1, i2)] = match self.kind {
                    NoiseKind::Gaussian => rng.sample(StandardNormal),
                    NoiseKind::Rademacher => {
                        if rng.random::<bool>() {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                };
            }
        }
        z
    }

    pub fn samples(&self, count: usize) -> Vec<DMatrix<f64>> {
        (0..count as u64).into_par_iter().map(|m| self.sample(m)).collect()
    }
}
