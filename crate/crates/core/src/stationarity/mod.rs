//! Stationary processes on product graphs: synthesis from white noise and
//! Monte Carlo diagnostics of the spectral characterizations.

mod estimate;
mod noise;
mod process;

pub use estimate::{
    circulant_residual, default_tol, estimate_cov, estimate_spectral_cov, estimate_vertex_cov, half_spectral_cov,
    multivariate_correlation, test_directional_stationarity, test_fgw_stationarity, test_simdiag, CovTensor,
    DiagnosticReport, DirectionalStationarityReport, FgwStationarityReport,
};
pub use noise::{NoiseKind, WhiteNoise2D};
pub use process::{
    construct_directional_from_gamma, construct_h_from_gamma, sample_directional, sample_directional_spectral,
    sample_fgw, sample_fgw_spectral, sample_multivariate, DirectionalProcess, FgwProcess,
};
