//! The homogeneous limit measure and its constants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::numerics::quadrature::{gauss_legendre, integrate, integrate_to_infinity};
use crate::special::{gamma, sphere_area};

/// `γ = (d-1)/(α-1)` and whether it lies outside `(0, 1)`.
pub fn gamma_exponent(d: usize, alpha: f64) -> Result<(f64, bool), SpectralError> {
    if !(alpha > 1.0) {
        return Err(SpectralError::Invalid(format!(
            "alpha = {alpha} must exceed 1"
        )));
    }
    if d < 2 {
        return Err(SpectralError::Invalid(
            "dimension must be at least 2".into(),
        ));
    }
    let g = (d as f64 - 1.0) / (alpha - 1.0);
    Ok((g, !(g > 0.0 && g < 1.0)))
}

/// `(i/γ) Γ(1-γ) e^{iπ(1-γ)/2}`.
pub fn gamma_constant_closed(g: f64) -> Complex64 {
    Complex64::i() / g
        * gamma(1.0 - g)
        * Complex64::from_polar(1.0, 0.5 * std::f64::consts::PI * (1.0 - g))
}

/// `∫_Θ^∞ e^{iθ} θ^{-a} dθ` from the asymptotic integration-by-parts series.
fn oscillatory_tail(a: f64, big: f64) -> Complex64 {
    // I(f) = i e^{iΘ} Σ_n i^n f^{(n)}(Θ), f^{(n)} = (-1)^n (a)_n Θ^{-a-n}.
    let mut term = big.powf(-a);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut ipow = Complex64::new(1.0, 0.0);
    for n in 0..60 {
        let t = ipow * term;
        sum += t;
        if t.norm() < 1e-18 * sum.norm() {
            break;
        }
        term *= -(a + n as f64) / big;
        ipow *= Complex64::i();
    }
    Complex64::i() * Complex64::from_polar(1.0, big) * sum
}

/// `∫_0^∞ (e^{iθ} - 1) θ^{-γ-1} dθ` by quadrature, conjugated when `conj`.
pub fn gamma_constant_quadrature(g: f64, conj: bool) -> Complex64 {
    let sign = if conj { -1.0 } else { 1.0 };
    let big = 2.0 * std::f64::consts::PI * 64.0;
    // θ = s^m removes the θ^{-γ} endpoint behaviour.
    let m = 1.0 / (1.0 - g);
    let s_max = big.powf(1.0 / m);
    let head = integrate(
        |s: f64| {
            if s <= 0.0 {
                return Complex64::new(0.0, sign * m);
            }
            let th = s.powf(m);
            let e = Complex64::new((th).cos() - 1.0, sign * th.sin());
            // (cos θ - 1) loses digits for small θ.
            let e = if th < 1e-3 {
                Complex64::new(-2.0 * (0.5 * th).sin().powi(2), sign * th.sin())
            } else {
                e
            };
            e * th.powf(-g - 1.0) * m * s.powf(m - 1.0)
        },
        0.0,
        s_max,
        1e-15,
        1e-14,
        4000,
    );
    let mut tail = oscillatory_tail(g + 1.0, big);
    if conj {
        tail = tail.conj();
    }
    head.value + tail - Complex64::new(big.powf(-g) / g, 0.0)
}

/// `Γ(γ)` from quadrature, checked against the closed form to `1e-8`.
pub fn gamma_constant(g: f64) -> Result<Complex64, SpectralError> {
    if !(g > 0.0 && g < 1.0) {
        return Err(SpectralError::Invalid(format!(
            "gamma = {g} outside (0, 1)"
        )));
    }
    let q = gamma_constant_quadrature(g, false);
    let c = gamma_constant_closed(g);
    if (q - c).norm() > 1e-8 * c.norm() {
        return Err(SpectralError::ConstantMismatch {
            direct: q,
            closed: c,
        });
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousMeasureParams {
    pub d: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
    /// `Γ(γ)`.
    pub big_gamma: Complex64,
    pub a1: f64,
    pub a2: f64,
    /// `a₁Γ + a₂Γ̄`.
    pub c: Complex64,
    /// Same constant from the direct radial quadrature.
    pub c_direct: Complex64,
    /// `(1/2π)^{d-1}` at unit energy.
    pub prefactor: f64,
    /// Density on `θ > 0`.
    pub c1: f64,
    /// Density on `θ < 0`.
    pub c2: f64,
}

impl HomogeneousMeasureParams {
    /// Parameters with given `a₁, a₂` (no direct cross-check).
    pub fn from_weights(d: usize, alpha: f64, a1: f64, a2: f64) -> Result<Self, SpectralError> {
        let (g, out) = gamma_exponent(d, alpha)?;
        if out {
            return Err(SpectralError::OutOfScope(g));
        }
        let big_gamma = gamma_constant(g)?;
        let c = big_gamma * a1 + big_gamma.conj() * a2;
        let prefactor = (2.0 * std::f64::consts::PI).powi(1 - d as i32);
        Ok(HomogeneousMeasureParams {
            d,
            alpha,
            gamma: g,
            beta: -1.0 - g,
            big_gamma,
            a1,
            a2,
            c,
            c_direct: c,
            prefactor,
            c1: a1 * prefactor,
            c2: a2 * prefactor,
        })
    }

    /// Predicted `lim h^{αγ} Tr(S^k - I)`.
    pub fn predicted_trace(&self, k: i64) -> Complex64 {
        let v = self.c * self.prefactor * (k.unsigned_abs() as f64).powf(self.gamma);
        if k < 0 {
            v.conj()
        } else {
            v
        }
    }
}

/// Angular nodes on `S^{d-1} × S^{d-2}` as `(y, η̂, weight)`; `d ∈ {2, 3}`.
fn angular_nodes(d: usize, n: usize) -> Result<Vec<(Vec<f64>, Vec<f64>, f64)>, SpectralError> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = Vec::new();
    match d {
        2 => {
            for i in 0..n {
                let a = two_pi * i as f64 / n as f64;
                let y = vec![a.cos(), a.sin()];
                for s in [1.0, -1.0] {
                    let eta = vec![-s * a.sin(), s * a.cos()];
                    out.push((y.clone(), eta, two_pi / n as f64));
                }
            }
        }
        3 => {
            let (xs, ws) = gauss_legendre(n);
            for (x, w) in xs.iter().zip(&ws) {
                let st = (1.0 - x * x).sqrt();
                for j in 0..n {
                    let ph = two_pi * j as f64 / n as f64;
                    let y = vec![st * ph.cos(), st * ph.sin(), *x];
                    let e1 = vec![x * ph.cos(), x * ph.sin(), -st];
                    let e2 = vec![-ph.sin(), ph.cos(), 0.0];
                    for q in 0..n {
                        let ps = two_pi * q as f64 / n as f64;
                        let eta: Vec<f64> = (0..3)
                            .map(|k| ps.cos() * e1[k] + ps.sin() * e2[k])
                            .collect();
                        out.push((
                            y.clone(),
                            eta,
                            w * (two_pi / n as f64) * (two_pi / n as f64),
                        ));
                    }
                }
            }
        }
        _ => {
            return Err(SpectralError::Invalid(format!(
                "angular profiles are supported for d = 2, 3 (got {d})"
            )))
        }
    }
    Ok(out)
}

/// `∫_0^∞ (e^{i g r^{1-α}} - 1) r^{d-2} dr` directly in `r`.
pub fn radial_integral(g: f64, alpha: f64, d: usize) -> Complex64 {
    if g == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let p = d as f64 - 2.0;
    // Split where the phase equals Φ; below, two integrations by parts.
    let big_phase: f64 = 2.0 * std::f64::consts::PI * 400.0;
    let rc = (big_phase / g.abs()).powf(-1.0 / (alpha - 1.0));
    let phase = |r: f64| g * r.powf(1.0 - alpha);
    let k = g * (1.0 - alpha);
    // ∫_0^{rc} e^{iφ} r^p dr ≈ e^{iφ(rc)} (u₁ - u₂)(rc), u₁ = r^{p+α}/(ik), u₂ = (p+α) r^{p+2α-1}/(-k²).
    let u1 = rc.powf(p + alpha) / (Complex64::i() * k);
    let u2 = Complex64::new(-(p + alpha) * rc.powf(p + 2.0 * alpha - 1.0) / (k * k), 0.0);
    let osc = Complex64::from_polar(1.0, phase(rc)) * (u1 - u2);
    let head = osc - Complex64::new(rc.powf(p + 1.0) / (p + 1.0), 0.0);
    let f = |r: f64| {
        let ph = phase(r);
        Complex64::new(-2.0 * (0.5 * ph).sin().powi(2), ph.sin()) * r.powf(p)
    };
    // Oscillatory middle, then the smooth tail.
    let r1 = (1.0 / g.abs()).powf(-1.0 / (alpha - 1.0));
    let mid = integrate(f, rc, r1, 1e-15, 1e-13, 20000);
    let tail = integrate_to_infinity(f, r1, 1e-15, 1e-13, 2000);
    head + mid.value + tail.value
}

/// Constants of the limit measure for an angular phase profile `g(y, η̂)`.
pub fn predicted_constants(
    g_profile: &dyn Fn(&[f64], &[f64]) -> f64,
    d: usize,
    alpha: f64,
    nodes: usize,
) -> Result<HomogeneousMeasureParams, SpectralError> {
    let (gam, out) = gamma_exponent(d, alpha)?;
    if out {
        return Err(SpectralError::OutOfScope(gam));
    }
    let nodes = angular_nodes(d, nodes)?;
    let mut a1 = 0.0;
    let mut a2 = 0.0;
    let mut direct = Complex64::new(0.0, 0.0);
    let mut cache: Vec<(f64, Complex64)> = Vec::new();
    for (y, eta, w) in &nodes {
        let g = g_profile(y, eta);
        if g > 0.0 {
            a1 += w * g.powf(gam);
        } else if g < 0.0 {
            a2 += w * (-g).powf(gam);
        }
        let r = match cache.iter().find(|(gv, _)| *gv == g) {
            Some((_, r)) => *r,
            None => {
                let r = radial_integral(g, alpha, d);
                cache.push((g, r));
                r
            }
        };
        direct += r * *w;
    }
    let scale = 1.0 / (alpha - 1.0);
    let mut p = HomogeneousMeasureParams::from_weights(d, alpha, a1 * scale, a2 * scale)?;
    p.c_direct = direct;
    if (p.c - direct).norm() > 1e-6 * p.c.norm().max(1e-300) {
        return Err(SpectralError::ConstantMismatch {
            direct,
            closed: p.c,
        });
    }
    Ok(p)
}

/// Central potentials: `g` is constant and the angular integral is `|S^{d-1}||S^{d-2}|`.
pub fn predicted_constants_central(
    g: f64,
    d: usize,
    alpha: f64,
) -> Result<HomogeneousMeasureParams, SpectralError> {
    let (gam, out) = gamma_exponent(d, alpha)?;
    if out {
        return Err(SpectralError::OutOfScope(gam));
    }
    let area = sphere_area(d) * sphere_area(d - 1);
    let w = area * g.abs().powf(gam) / (alpha - 1.0);
    let (a1, a2) = if g > 0.0 { (w, 0.0) } else { (0.0, w) };
    let mut p = HomogeneousMeasureParams::from_weights(d, alpha, a1, a2)?;
    let direct = radial_integral(g, alpha, d) * area;
    p.c_direct = direct;
    if (p.c - direct).norm() > 1e-6 * p.c.norm().max(1e-300) {
        return Err(SpectralError::ConstantMismatch {
            direct,
            closed: p.c,
        });
    }
    Ok(p)
}
