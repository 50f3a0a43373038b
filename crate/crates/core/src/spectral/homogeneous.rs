//! Pushforward of the homogeneous measure `c₁θ₊^β + c₂θ₋^β` to the circle.

use num_complex::Complex64;

use super::{HomogeneousMeasureParams, SpectralError, TWO_PI};
use crate::numerics::quadrature::integrate;
use crate::special::hurwitz_zeta;

fn check(phi0: f64, phi1: f64) -> Result<(), SpectralError> {
    if !(0.0 < phi0 && phi0 < phi1 && phi1 < TWO_PI) {
        return Err(SpectralError::BadSector(phi0, phi1));
    }
    Ok(())
}

/// `Σ_{n≥0} ∫_{a+2πn}^{b+2πn} θ^β dθ` in closed form.
fn branch_sum(beta: f64, a: f64, b: f64) -> f64 {
    let g = -1.0 - beta;
    TWO_PI.powf(-g) / g * (hurwitz_zeta(g, a / TWO_PI) - hurwitz_zeta(g, b / TWO_PI))
}

/// Mass of the sector `[φ₀, φ₁]` under the predicted pushforward.
pub fn predicted_sector_mass(
    params: &HomogeneousMeasureParams,
    phi0: f64,
    phi1: f64,
) -> Result<f64, SpectralError> {
    check(phi0, phi1)?;
    let mut m = 0.0;
    if params.c1 != 0.0 {
        m += params.c1 * branch_sum(params.beta, phi0, phi1);
    }
    if params.c2 != 0.0 {
        m += params.c2 * branch_sum(params.beta, TWO_PI - phi1, TWO_PI - phi0);
    }
    Ok(m)
}

/// Same mass from the first `n` branches on each side, summed term by term.
pub fn sector_mass_branches(
    params: &HomogeneousMeasureParams,
    phi0: f64,
    phi1: f64,
    n: usize,
) -> Result<f64, SpectralError> {
    check(phi0, phi1)?;
    let e = params.beta + 1.0;
    let piece = |a: f64, b: f64| (b.powf(e) - a.powf(e)) / e;
    let mut m = 0.0;
    for k in 0..n {
        let s = TWO_PI * k as f64;
        m += params.c1 * piece(phi0 + s, phi1 + s);
        m += params.c2 * piece(TWO_PI - phi1 + s, TWO_PI - phi0 + s);
    }
    Ok(m)
}

/// Density of the pushforward at `φ ∈ (0, 2π)`.
pub fn predicted_density(params: &HomogeneousMeasureParams, phi: f64) -> f64 {
    density(params, phi / TWO_PI, 1.0 - phi / TWO_PI)
}

/// Density at `φ = 2πu`, with `v = 1 - u` supplied separately to keep it exact near `2π`.
fn density(params: &HomogeneousMeasureParams, u: f64, v: f64) -> f64 {
    let s = -params.beta;
    let w = TWO_PI.powf(params.beta);
    let mut r = 0.0;
    if params.c1 != 0.0 {
        r += params.c1 * w * hurwitz_zeta(s, u);
    }
    if params.c2 != 0.0 {
        r += params.c2 * w * hurwitz_zeta(s, v);
    }
    r
}

/// `∫ (e^{ikφ} - 1) dμ` by quadrature of the branch-summed density, and the
/// closed form `(Γc₁ + Γ̄c₂) k^γ`.
pub fn fourier_pairing(params: &HomogeneousMeasureParams, k: u32) -> (Complex64, Complex64) {
    let kf = k as f64;
    let g = params.gamma;
    // φ = π t^m near each endpoint flattens the φ^{-γ} behaviour.
    let m = 1.0 / (1.0 - g);
    let half = std::f64::consts::PI;
    let f = |phi: f64, u: f64, v: f64| super::expm1_i(kf * phi) * density(params, u, v);
    let left = integrate(
        |t: f64| {
            if t <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let phi = half * t.powf(m);
            let u = phi / TWO_PI;
            f(phi, u, 1.0 - u) * (half * m * t.powf(m - 1.0))
        },
        0.0,
        1.0,
        1e-14,
        1e-12,
        4000,
    );
    let right = integrate(
        |t: f64| {
            if t <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let x = half * t.powf(m);
            let v = x / TWO_PI;
            // e^{ik(2π - x)} = e^{-ikx} for integer k.
            f(-x, 1.0 - v, v) * (half * m * t.powf(m - 1.0))
        },
        0.0,
        1.0,
        1e-14,
        1e-12,
        4000,
    );
    let closed = (params.big_gamma * params.c1 + params.big_gamma.conj() * params.c2) * kf.powf(g);
    (left.value + right.value, closed)
}
