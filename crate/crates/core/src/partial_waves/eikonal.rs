//! Straight-line (eikonal) phase shifts.

use super::{bessel_order, PartialWaveError};
use crate::numerics::quadrature::{integrate, integrate_to_infinity};
use crate::potential::PotentialSpec;
use crate::special::gamma;

/// `-½ ∫ V(√(b² + t²)) dt` over the whole line.
pub fn eikonal_phase(spec: &PotentialSpec, b: f64) -> f64 {
    match spec.power_terms() {
        Some(terms) => terms
            .iter()
            .map(|&(c, p)| power_line_integral(c, p, b))
            .sum(),
        None => {
            let q = integrate_to_infinity(
                |t: f64| spec.radial((b * b + t * t).sqrt()),
                0.0,
                1e-300,
                1e-13,
                2000,
            );
            -q.value
        }
    }
}

/// `-½ ∫ c (b² + t²)^{-p/2} dt = -(c/2) b^{1-p} √π Γ((p-1)/2) / Γ(p/2)`.
pub(crate) fn power_line_integral(c: f64, p: f64, b: f64) -> f64 {
    -0.5 * c * b.powf(1.0 - p) * power_line_constant(p)
}

pub(crate) fn power_line_constant(p: f64) -> f64 {
    std::f64::consts::PI.sqrt() * gamma(0.5 * (p - 1.0)) / gamma(0.5 * p)
}

/// `δ_eik(ℓ) = G_eik(b) / (2h)` with `b = (ℓ + (d-2)/2) h`; refuses `b < b_min`.
pub fn phase_shift_eikonal(
    spec: &PotentialSpec,
    l: u64,
    h: f64,
    b_min: f64,
) -> Result<f64, PartialWaveError> {
    let b = bessel_order(l, spec.dimension) * h;
    if b < b_min {
        return Err(PartialWaveError::BelowEikonalRange { b, b_min });
    }
    Ok(eikonal_phase(spec, b) / (2.0 * h))
}

/// Leading coefficient of `G_eik` for the homogeneous part: `G_eik(b ω', η̂) ≈ g(ω', η̂) b^{1-α}`.
pub fn eikonal_g(spec: &PotentialSpec, omega: &[f64], eta_hat: &[f64]) -> f64 {
    let c = spec.strength;
    let alpha = spec.alpha;
    if spec.is_central() || c == 0.0 {
        return -0.5 * c * spec.v0(eta_hat) * power_line_constant(alpha);
    }
    // s = tan θ along the line η̂ + s ω.
    let f = |th: f64| {
        let (s, co) = th.sin_cos();
        let y: Vec<f64> = eta_hat
            .iter()
            .zip(omega)
            .map(|(e, w)| co * e + s * w)
            .collect();
        spec.v0(&y) * co.powf(alpha - 2.0)
    };
    let h = std::f64::consts::FRAC_PI_2;
    -0.5 * c * integrate(f, -h, h, 1e-14, 1e-12, 4000).value
}
