//! Scaled spectral measures of `S_h` and their homogeneous limits.

mod basket;
mod constants;
mod convergence;
mod homogeneous;
mod measure;

pub use basket::{weighted_basket, weighted_norm, TestFunction};
pub use constants::{
    gamma_constant, gamma_constant_closed, gamma_constant_quadrature, gamma_exponent,
    predicted_constants, predicted_constants_central, radial_integral, HomogeneousMeasureParams,
};
pub use convergence::{
    convergence_order, convergence_report, ConvergenceOptions, ConvergenceReport, SectorRow,
    SectorSummary, TraceLimit, TraceRow,
};
pub use homogeneous::{
    fourier_pairing, predicted_density, predicted_sector_mass, sector_mass_branches,
};
pub use measure::{
    build_mu_h, dyadic_annulus_counts, mu_pair, sector_count, trace_power, trace_power_bound,
    AnnulusCount, AtomicCircleMeasure, PairResult, SectorCount,
};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("gamma = {0} is outside (0, 1); the limit law does not apply")]
    OutOfScope(f64),
    #[error("direct and closed-form constants disagree: {direct} vs {closed}")]
    ConstantMismatch {
        direct: Complex64,
        closed: Complex64,
    },
    #[error("sector [{0}, {1}] must satisfy 0 < phi0 < phi1 < 2 pi")]
    BadSector(f64, f64),
    #[error("test function has weighted ratio {0:e} above its declared norm")]
    UnboundedWeight(f64),
    #[error("need at least {0} step sizes in geometric progression")]
    Sweep(usize),
}

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `e^{iθ} - 1` without cancellation for small `θ`.
pub(crate) fn expm1_i(theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    Complex64::new(-2.0 * s * s, theta.sin())
}
