//! Special functions.

pub mod gamma;
pub mod zeta;

pub use gamma::{gamma, ln_gamma, sphere_area};
pub use zeta::hurwitz_zeta;
