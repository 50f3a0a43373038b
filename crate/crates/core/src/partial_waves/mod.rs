//! Quantum phase shifts of central potentials.
//!
//! Angular momentum `ℓ` enters through the order `ν = ℓ + (d-2)/2` and the
//! impact parameter `b = ν h`.

mod eikonal;
mod gfit;
mod riccati;
mod solver;
mod table;

pub use eikonal::{eikonal_g, eikonal_phase, phase_shift_eikonal};
pub use gfit::{quantum_g_fit, QuantumG};
pub use riccati::{
    free_phase, riccati_bessel, riccati_bessel_with_method, BesselMethod, RiccatiBessel,
};
pub use solver::{phase_shift_nu, ExactPhaseShift, SolverOptions};
pub use table::{build_table, PhaseShiftEntry, PhaseShiftTable, ShiftSource, TableOptions};

use thiserror::Error;

use crate::numerics::ode::OdeError;
use crate::potential::PotentialSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartialWaveError {
    #[error("phase shifts need a central potential")]
    NotCentral,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("integrator failure: {0}")]
    Ode(OdeError),
    #[error("non-finite phase")]
    NonFinite,
    #[error("tail quadrature did not converge (error {0:e})")]
    Quadrature(f64),
    #[error("methods disagree at nu = {nu}, h = {h}: {a} vs {b}")]
    MethodDisagreement { nu: f64, h: f64, a: f64, b: f64 },
    #[error("eikonal approximation requested at b = {b} below b_min = {b_min}")]
    BelowEikonalRange { b: f64, b_min: f64 },
}

/// Order of the radial Bessel functions for angular momentum `ℓ`.
pub fn bessel_order(l: u64, d: usize) -> f64 {
    l as f64 + (d as f64 - 2.0) / 2.0
}

/// Dimension of the degree-`ℓ` spherical harmonics on `S^{d-1}`.
pub fn multiplicity(l: u64, d: usize) -> u64 {
    assert!(d >= 2, "dimension must be at least 2");
    if d == 2 {
        return if l == 0 { 1 } else { 2 };
    }
    // (2ℓ+d-2) C(ℓ+d-3, d-3) / (d-2)
    let l = l as u128;
    let d = d as u128;
    let mut binom: u128 = 1;
    for i in 1..=(d - 3) {
        binom = binom * (l + i) / i;
    }
    ((2 * l + d - 2) * binom / (d - 2)) as u64
}

/// Exact phase shift for angular momentum `ℓ` (unit energy).
pub fn phase_shift_exact(spec: &PotentialSpec, l: u64, h: f64) -> Result<f64, PartialWaveError> {
    Ok(phase_shift_nu(
        spec,
        bessel_order(l, spec.dimension),
        h,
        &SolverOptions::default(),
    )?
    .delta)
}
