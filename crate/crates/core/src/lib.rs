//! Signal processing on Cartesian product graphs.
//!
//! A signal on `G1 □ G2` is stored as an `N1 × N2` matrix and transformed
//! with one eigenbasis per factor, `F̂ = U1^T F U2`, instead of the
//! `N1N2 × N1N2` eigenbasis of the product. On top of the transform the
//! crate provides directional variation, 2-D spectral and polynomial
//! filters, energy-model denoising with separate weights per factor, and
//! synthesis and testing of stationary random processes.
//!
//! ```
//! use mdgsp::{cartesian_product, gft_2d, Factor, Graph, GraphKind, Signal2D};
//!
//! let g1 = Graph::standard(GraphKind::Path, 4)?;
//! let g2 = Graph::standard(GraphKind::Cycle, 5)?;
//! assert_eq!(cartesian_product(&g1, &g2).graph.edge_count(), 4 * 5 + 3 * 5);
//!
//! let (f1, f2) = (Factor::laplacian(&g1)?, Factor::laplacian(&g2)?);
//! let signal = Signal2D::from_fn(4, 5, |_, _| 1.0);
//! let spectrum = gft_2d(&signal, &f1.basis, &f2.basis)?;
//! assert!((spectrum.coeffs[(0, 0)].re - 20f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), mdgsp::Error>(())
//! ```

pub mod denoise;
mod error;
pub mod filtering;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod perf;
pub mod spectral;
pub mod stationarity;
pub mod transform;
pub mod variation;

pub use denoise::{ebem_energy, ebem_minimize, EbemParams, SolveMethod, SolveReport, SolverOptions};
pub use error::{Error, Result};
pub use filtering::{
    locality_neighborhood, polynomial_filter_vertex, spectral_filter_2d, Kernel1D, KernelSpec, PolyKernel2D,
    SpectralKernel2D,
};
pub use graph::{cartesian_product, Graph, GraphFile, GraphKind, ProductGraph};
pub use linalg::C64;
pub use spectral::{eigenbasis, multiplicity_partition, BasisSource, EigenBasis, Factor, MultiplicityPartition};
pub use transform::{aggregate_to_1d, gft_2d, inverse_gft_2d, Signal2D, SignalMV, Spectrum2D, SpectrumGroup1D};
pub use variation::{total_directional_variation, Direction, DirectionalVariationReport};
