//! Classical scattering by the Hamiltonian `|ξ|² + V(x)` at unit energy.

mod deflection;
mod sojourn;
mod trajectory;

pub use deflection::{deflection_central, turning_point, Deflection};
pub use sojourn::{
    classical_g, classical_g_fit, default_g_impacts, fit_sojourn_asymptotics, phase_function, GFit,
    Parametrization, ShiftFit, SojournFitReport,
};
pub use trajectory::{
    extract_asymptotics, integrate_trajectory, scatter_ray, sojourn_phi, ScatterEvent, Trajectory,
    TrajectoryOptions, TrajectorySample,
};

use thiserror::Error;

use crate::numerics::ode::OdeError;
use crate::potential::PotentialError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("integrator failure: {0}")]
    Ode(OdeError),
    #[error("trajectory entered the excluded inner region")]
    InnerRegion,
    #[error("suspected trapping: arc length {length:e} without exit")]
    Trapping { length: f64 },
    #[error("asymptotic fit residual {0:e} above tolerance; increase R0")]
    FitResidual(f64),
    #[error("free-tail quadrature did not converge (error {0:e})")]
    UnconvergedTail(f64),
    #[error("no turning point")]
    NoTurningPoint,
    #[error("multiple turning points (orbiting regime)")]
    MultipleTurningPoints,
    #[error("fit correlation {0} below 0.999")]
    FitCorrelation(f64),
    #[error("relative fit error {0:e} above 2%")]
    FitError(f64),
}

/// Rotation by a right angle in the plane, used to build impact vectors in `d = 2`.
pub fn perpendicular(omega: &[f64]) -> Vec<f64> {
    vec![-omega[1], omega[0]]
}
