//! Classical and quantum scattering by long-range potentials `V ~ r^{-α}`, and the
//! spectral measure of the scattering matrix in the semiclassical limit.
//!
//! - [`potential`]: homogeneous potentials with an angular profile.
//! - [`classical`]: scattering rays, deflection, sojourn time and the phase coefficient `g`.
//! - [`partial_waves`]: exact and eikonal phase shifts, tables with tail bounds.
//! - [`spectral`]: traces, sector counts, the limiting measure and its constants.
//! - [`experiment`]: configs, sweeps and verification behind the `sojourn-lab` binary.
pub mod classical;
pub mod experiment;
pub mod numerics;
pub mod partial_waves;
pub mod potential;
pub mod special;
pub mod spectral;
