//! Scattering angle of central potentials by quadrature.

use std::f64::consts::FRAC_PI_2;

use super::ClassicalError;
use crate::numerics::quadrature::integrate;
use crate::numerics::roots::brent;
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deflection {
    /// Scattering angle `Σ(η)`; positive for repulsion.
    pub sigma: f64,
    /// Outermost turning radius.
    pub r_turn: f64,
    pub quad_error: f64,
}

/// Outermost root of `1 - η²/r² - V(r)`, returned as `r_m/η - 1` together with `r_m`.
pub fn turning_point(spec: &PotentialSpec, eta: f64) -> Result<(f64, f64), ClassicalError> {
    if spec.central_coefficient().is_none() {
        return Err(ClassicalError::Invalid(
            "deflection needs a central potential".into(),
        ));
    }
    let v = |r: f64| spec.radial(r);
    let floor = 10.0 * spec.r_min;
    if eta == 0.0 {
        // Head-on: 1 = V(r).
        let f = |r: f64| 1.0 - v(r);
        let mut hi = 1.0;
        while f(hi) <= 0.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(ClassicalError::NoTurningPoint);
            }
        }
        let mut lo = hi;
        while f(lo) > 0.0 {
            lo *= 0.5;
            if lo < floor {
                return Err(ClassicalError::NoTurningPoint);
            }
        }
        let r = brent(f, lo, hi, 1e-15 * hi, 300).ok_or(ClassicalError::NoTurningPoint)?;
        return Ok((f64::INFINITY, r));
    }
    let f = |u: f64| {
        let q = 1.0 + u;
        u * (2.0 + u) / (q * q) - v(eta * q)
    };
    // Walk inward in r = η(1+u) from well outside the interaction.
    let mut u_hi = 1.0;
    while f(u_hi) <= 0.0 {
        u_hi = 2.0 * u_hi + 1.0;
        if u_hi > 1e12 {
            return Err(ClassicalError::NoTurningPoint);
        }
    }
    let q = 0.97;
    let mut r = eta * (1.0 + u_hi);
    let mut prev_u = u_hi;
    let root_bracket;
    loop {
        let rn = r * q;
        let un = rn / eta - 1.0;
        if rn < floor {
            return Err(ClassicalError::NoTurningPoint);
        }
        // Refine near the free turning point where f varies on the scale of V.
        if f(un) <= 0.0 {
            root_bracket = (un, prev_u);
            break;
        }
        // Close to u = 0 the natural scale is u itself.
        if un.abs() < 1e-3 && un > 0.0 {
            let mut a = un;
            loop {
                let b = a * 0.5;
                if f(b) <= 0.0 {
                    break;
                }
                a = b;
                if a < 1e-300 {
                    return Err(ClassicalError::NoTurningPoint);
                }
            }
            root_bracket = (a * 0.5, a);
            break;
        }
        prev_u = un;
        r = rn;
    }
    let (a, b) = root_bracket;
    let u =
        brent(f, a, b, 1e-18 * b.abs().max(1e-300), 400).ok_or(ClassicalError::NoTurningPoint)?;
    let rm = eta * (1.0 + u);
    // Any further sign change inside signals orbiting.
    let mut rr = rm * 0.97;
    let stop = floor.max(rm * 1e-3);
    let mut negative_seen = false;
    while rr > stop {
        let g = 1.0 - eta * eta / (rr * rr) - v(rr);
        if g < 0.0 {
            negative_seen = true;
        } else if negative_seen {
            return Err(ClassicalError::MultipleTurningPoints);
        }
        rr *= 0.97;
    }
    Ok((u, rm))
}

/// `Σ(η) = 2 ∫_0^{π/2} [1 - ρ/√(ρ² + Q(θ))] dθ` with `ρ = η/r_m`,
/// `Q = [V(r_m) - V(r_m / sin θ)] / cos² θ`.
pub fn deflection_central(spec: &PotentialSpec, eta: f64) -> Result<Deflection, ClassicalError> {
    if !(eta >= 0.0) {
        return Err(ClassicalError::Invalid(
            "impact parameter must be nonnegative".into(),
        ));
    }
    if spec.is_zero() {
        return Ok(Deflection {
            sigma: 0.0,
            r_turn: eta,
            quad_error: 0.0,
        });
    }
    let (_, rm) = turning_point(spec, eta)?;
    let rho = eta / rm;
    let powers = spec.power_terms();
    let q_of = |theta: f64| -> f64 {
        let c = (FRAC_PI_2 - theta).sin();
        let c2 = c * c;
        let ln_s = 0.5 * (-c2).ln_1p();
        match &powers {
            Some(terms) => terms
                .iter()
                .map(|&(k, p)| {
                    // V(r_m) - V(r_m/s) = k r_m^-p (1 - s^p)
                    let one_minus = -(p * ln_s).exp_m1();
                    k * rm.powf(-p) * one_minus / c2
                })
                .sum(),
            None => (spec.radial(rm) - spec.radial(rm / ln_s.exp())) / c2,
        }
    };
    let res = integrate(
        |theta: f64| {
            let q = q_of(theta);
            let s = (rho * rho + q).sqrt();
            q / (s * (s + rho))
        },
        0.0,
        FRAC_PI_2,
        1e-13,
        1e-13,
        4000,
    );
    if !res.value.is_finite() {
        return Err(ClassicalError::Invalid(
            "deflection integrand not finite".into(),
        ));
    }
    Ok(Deflection {
        sigma: 2.0 * res.value,
        r_turn: rm,
        quad_error: 2.0 * res.error,
    })
}
