//! Potentials `V(x) = c v0(x̂) / |x|^α + W(|x|)` with closed-form gradients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::fit::power_law_fit;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("point at |x| = {r:e} is inside the excluded ball r < {r_min:e}")]
    PointAtOrigin { r: f64, r_min: f64 },
    #[error("invalid potential: {0}")]
    Invalid(String),
    #[error("need at least 3 radii spanning 2 decades, got {0}")]
    InsufficientRadii(usize),
    #[error("non-finite value at r = {0:e}")]
    NonFinite(f64),
}

/// Angular factor `v0` on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AngularProfile {
    #[default]
    Constant,
    /// `a0 + Σ_n cos[n-1] cos(nθ) + sin[n-1] sin(nθ)`; dimension 2 only.
    Fourier {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// `Σ_j coeffs[j] (axis · x̂)^j`.
    Zonal { axis: Vec<f64>, coeffs: Vec<f64> },
}

/// One radial correction term of `W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorrectionTerm {
    /// `coeff * r^-exponent`
    Power { coeff: f64, exponent: f64 },
    /// `coeff * r^-exponent * sin(ln r)`
    PowerSinLog { coeff: f64, exponent: f64 },
    /// `coeff * exp(-rate r)`
    Exponential { coeff: f64, rate: f64 },
}

impl CorrectionTerm {
    fn scale(&mut self, s: f64) {
        match self {
            CorrectionTerm::Power { coeff, .. }
            | CorrectionTerm::PowerSinLog { coeff, .. }
            | CorrectionTerm::Exponential { coeff, .. } => *coeff *= s,
        }
    }

    /// k-th radial derivative.
    pub fn radial_derivative(&self, r: f64, k: usize) -> f64 {
        match *self {
            CorrectionTerm::Power { coeff, exponent } => {
                let mut f = coeff;
                for j in 0..k {
                    f *= -exponent - j as f64;
                }
                f * r.powf(-exponent - k as f64)
            }
            CorrectionTerm::PowerSinLog { coeff, exponent } => {
                // Im of coeff * r^s with s = -exponent + i
                let s = Complex64::new(-exponent, 1.0);
                let mut f = Complex64::new(coeff, 0.0);
                for j in 0..k {
                    f *= s - j as f64;
                }
                let p = ((s - k as f64) * r.ln()).exp();
                (f * p).im
            }
            CorrectionTerm::Exponential { coeff, rate } => {
                coeff * (-rate).powi(k as i32) * (-rate * r).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Correction {
    /// Declared extra decay beyond `r^-α`.
    pub epsilon: f64,
    #[serde(default)]
    pub terms: Vec<CorrectionTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub dimension: usize,
    pub alpha: f64,
    pub strength: f64,
    #[serde(default)]
    pub v0_coeffs: AngularProfile,
    #[serde(default)]
    pub correction: Option<Correction>,
    #[serde(default = "default_energy")]
    pub energy: f64,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
}

fn default_energy() -> f64 {
    1.0
}

fn default_r_min() -> f64 {
    1e-6
}

impl PotentialSpec {
    /// `c / r^α` in dimension `d`.
    pub fn central(dimension: usize, alpha: f64, strength: f64) -> Self {
        PotentialSpec {
            dimension,
            alpha,
            strength,
            v0_coeffs: AngularProfile::Constant,
            correction: None,
            energy: 1.0,
            r_min: 1e-6,
        }
    }

    pub fn with_profile(mut self, p: AngularProfile) -> Self {
        self.v0_coeffs = p;
        self
    }

    pub fn with_correction(mut self, c: Correction) -> Self {
        self.correction = Some(c);
        self
    }

    pub fn with_energy(mut self, e: f64) -> Self {
        self.energy = e;
        self
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        let bad = |m: &str| Err(PotentialError::Invalid(m.to_string()));
        if self.dimension < 2 {
            return bad("dimension must be at least 2");
        }
        if !(self.alpha > 1.0) || !self.alpha.is_finite() {
            return bad("alpha must exceed 1");
        }
        if !self.strength.is_finite() {
            return bad("strength must be finite");
        }
        if !(self.energy > 0.0) {
            return bad("energy must be positive");
        }
        if !(self.r_min > 0.0) {
            return bad("r_min must be positive");
        }
        match &self.v0_coeffs {
            AngularProfile::Constant => {}
            AngularProfile::Fourier { a0, cos, sin } => {
                if self.dimension != 2 {
                    return bad("Fourier profiles need dimension 2");
                }
                if !a0.is_finite() || cos.iter().chain(sin).any(|v| !v.is_finite()) {
                    return bad("profile coefficients must be finite");
                }
            }
            AngularProfile::Zonal { axis, coeffs } => {
                if axis.len() != self.dimension {
                    return bad("zonal axis length must equal the dimension");
                }
                let n: f64 = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
                if !(n > 0.0) || coeffs.iter().any(|v| !v.is_finite()) {
                    return bad("zonal profile needs a nonzero axis and finite coefficients");
                }
            }
        }
        if let Some(c) = &self.correction {
            if !(c.epsilon > 0.0) {
                return bad("correction epsilon must be positive");
            }
        }
        Ok(())
    }

    /// True when `α > d`, the regime of the trace theorem.
    pub fn short_range(&self) -> bool {
        self.alpha > self.dimension as f64
    }

    /// True when `V` depends on `|x|` only.
    pub fn is_central(&self) -> bool {
        match &self.v0_coeffs {
            AngularProfile::Constant => true,
            AngularProfile::Fourier { cos, sin, .. } => cos.iter().chain(sin).all(|v| *v == 0.0),
            AngularProfile::Zonal { coeffs, .. } => coeffs.iter().skip(1).all(|v| *v == 0.0),
        }
    }

    /// True when `V ≡ 0`.
    pub fn is_zero(&self) -> bool {
        let main_zero = self.strength == 0.0 || self.profile_sup() == 0.0;
        let w_zero = self.correction.as_ref().map_or(true, |c| {
            c.terms.iter().all(|t| match t {
                CorrectionTerm::Power { coeff, .. }
                | CorrectionTerm::PowerSinLog { coeff, .. }
                | CorrectionTerm::Exponential { coeff, .. } => *coeff == 0.0,
            })
        });
        main_zero && w_zero
    }

    /// Coefficient `c v0` of `r^-α` for central potentials.
    pub fn central_coefficient(&self) -> Option<f64> {
        if !self.is_central() {
            return None;
        }
        let v0 = match &self.v0_coeffs {
            AngularProfile::Constant => 1.0,
            AngularProfile::Fourier { a0, .. } => *a0,
            AngularProfile::Zonal { coeffs, .. } => coeffs.first().copied().unwrap_or(0.0),
        };
        Some(self.strength * v0)
    }

    /// Upper bound of `|v0|` (without the strength factor).
    pub fn profile_sup(&self) -> f64 {
        match &self.v0_coeffs {
            AngularProfile::Constant => 1.0,
            AngularProfile::Fourier { a0, cos, sin } => {
                a0.abs() + cos.iter().chain(sin).map(|v| v.abs()).sum::<f64>()
            }
            AngularProfile::Zonal { coeffs, .. } => coeffs.iter().map(|v| v.abs()).sum(),
        }
    }

    /// Declared extra decay of `W` (infinite when there is no correction).
    pub fn epsilon(&self) -> f64 {
        self.correction
            .as_ref()
            .map_or(f64::INFINITY, |c| c.epsilon)
    }

    /// Angular factor `v0` at a unit vector.
    pub fn v0(&self, unit: &[f64]) -> f64 {
        self.profile(unit, 1.0).0
    }

    fn correction_terms(&self) -> &[CorrectionTerm] {
        self.correction.as_ref().map_or(&[], |c| &c.terms)
    }

    /// `(v0(x̂), ∇_sphere-part)`: value and the tangential gradient of `v0`
    /// extended as a degree-zero function, multiplied by `r`.
    fn profile(&self, x: &[f64], r: f64) -> (f64, Vec<f64>) {
        let d = x.len();
        match &self.v0_coeffs {
            AngularProfile::Constant => (1.0, vec![0.0; d]),
            AngularProfile::Fourier { a0, cos, sin } => {
                let th = x[1].atan2(x[0]);
                let (mut v, mut dv) = (*a0, 0.0);
                for (n, c) in cos.iter().enumerate() {
                    let m = (n + 1) as f64;
                    v += c * (m * th).cos();
                    dv -= c * m * (m * th).sin();
                }
                for (n, s) in sin.iter().enumerate() {
                    let m = (n + 1) as f64;
                    v += s * (m * th).sin();
                    dv += s * m * (m * th).cos();
                }
                // r ∇θ = θ̂ = (-sin θ, cos θ)
                (v, vec![-dv * x[1] / r, dv * x[0] / r])
            }
            AngularProfile::Zonal { axis, coeffs } => {
                let n: f64 = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
                let t: f64 = axis.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() / (n * r);
                let (mut v, mut dv, mut p) = (0.0, 0.0, 1.0);
                for (j, c) in coeffs.iter().enumerate() {
                    v += c * p;
                    if j + 1 < coeffs.len() {
                        dv += coeffs[j + 1] * (j + 1) as f64 * p;
                    }
                    p *= t;
                }
                let g = (0..d).map(|i| dv * (axis[i] / n - t * x[i] / r)).collect();
                (v, g)
            }
        }
    }

    fn radius(&self, x: &[f64]) -> Result<f64, PotentialError> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(r >= self.r_min) {
            return Err(PotentialError::PointAtOrigin {
                r,
                r_min: self.r_min,
            });
        }
        Ok(r)
    }

    /// `W(r)` and its radial derivatives.
    pub fn correction_radial(&self, r: f64, k: usize) -> f64 {
        self.correction_terms()
            .iter()
            .map(|t| t.radial_derivative(r, k))
            .sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, PotentialError> {
        let r = self.radius(x)?;
        let (v0, _) = self.profile(x, r);
        let v = self.strength * v0 * r.powf(-self.alpha) + self.correction_radial(r, 0);
        if !v.is_finite() {
            return Err(PotentialError::NonFinite(r));
        }
        Ok(v)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, PotentialError> {
        let r = self.radius(x)?;
        let (v0, tang) = self.profile(x, r);
        let ra = r.powf(-self.alpha);
        let radial = -self.alpha * self.strength * v0 * ra / r + self.correction_radial(r, 1);
        let g: Vec<f64> = (0..x.len())
            .map(|i| radial * x[i] / r + self.strength * ra * tang[i] / r)
            .collect();
        if g.iter().any(|v| !v.is_finite()) {
            return Err(PotentialError::NonFinite(r));
        }
        Ok(g)
    }

    /// `V(r)` for central potentials (no origin guard; callers stay outside `r_min`).
    pub fn radial(&self, r: f64) -> f64 {
        let c = self.central_coefficient().unwrap_or(0.0);
        c * r.powf(-self.alpha) + self.correction_radial(r, 0)
    }

    /// `V'(r)` for central potentials.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        let c = self.central_coefficient().unwrap_or(0.0);
        -self.alpha * c * r.powf(-self.alpha - 1.0) + self.correction_radial(r, 1)
    }

    /// Central potentials that are finite sums of powers, as `(coeff, exponent)`.
    pub fn power_terms(&self) -> Option<Vec<(f64, f64)>> {
        let c = self.central_coefficient()?;
        let mut out = vec![(c, self.alpha)];
        for t in self.correction_terms() {
            match *t {
                CorrectionTerm::Power { coeff, exponent } => out.push((coeff, exponent)),
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Rescales to unit energy: `V -> V / E`, `h -> h / sqrt(E)`.
pub fn normalize_energy(
    spec: &PotentialSpec,
    h: f64,
) -> Result<(PotentialSpec, f64), PotentialError> {
    if !(spec.energy > 0.0) {
        return Err(PotentialError::Invalid("energy must be positive".into()));
    }
    if !(h > 0.0) {
        return Err(PotentialError::Invalid("h must be positive".into()));
    }
    let e = spec.energy;
    let mut out = spec.clone();
    out.strength /= e;
    if let Some(c) = &mut out.correction {
        for t in &mut c.terms {
            t.scale(1.0 / e);
        }
    }
    out.energy = 1.0;
    Ok((out, h / e.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayOrder {
    pub order: usize,
    /// Fitted exponent of `|∂_r^k W|`; `-inf` when `W^{(k)}` vanishes.
    pub exponent: f64,
    /// Largest exponent accepted.
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub orders: Vec<DecayOrder>,
    pub pass: bool,
}

/// Log-log regression of radial derivatives of `W`. Order `k` passes when
/// the fitted exponent is at most `-(α + ε + k) + 0.1 (k + 1)`.
pub fn check_symbol_decay(
    spec: &PotentialSpec,
    radii: &[f64],
    max_order: usize,
) -> Result<DecayReport, PotentialError> {
    if radii.len() < 3
        || radii.windows(2).any(|w| !(w[1] > w[0]))
        || radii[0] <= 0.0
        || radii[radii.len() - 1] / radii[0] < 100.0
    {
        return Err(PotentialError::InsufficientRadii(radii.len()));
    }
    let eps = if spec.epsilon().is_finite() {
        spec.epsilon()
    } else {
        0.0
    };
    let mut orders = Vec::new();
    for k in 0..=max_order {
        let vals: Vec<f64> = radii
            .iter()
            .map(|&r| spec.correction_radial(r, k))
            .collect();
        if let Some(r) = vals
            .iter()
            .zip(radii)
            .find(|(v, _)| !v.is_finite())
            .map(|(_, r)| *r)
        {
            return Err(PotentialError::NonFinite(r));
        }
        let threshold = -(spec.alpha + eps + k as f64) + 0.1 * (k as f64 + 1.0);
        let exponent = if vals.iter().all(|v| *v == 0.0) {
            f64::NEG_INFINITY
        } else {
            power_law_fit(radii, &vals).map_or(f64::NAN, |f| f.slope)
        };
        orders.push(DecayOrder {
            order: k,
            exponent,
            threshold,
            pass: exponent <= threshold,
        });
    }
    let pass = orders.iter().all(|o| o.pass);
    Ok(DecayReport { orders, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let s = PotentialSpec::central(2, 3.0, 1.0);
        assert_eq!(s.evaluate(&[2.0, 0.0]).unwrap(), 0.125);
        let g = s.gradient(&[2.0, 0.0]).unwrap();
        assert!((g[0] + 0.1875).abs() < 1e-16 && g[1] == 0.0);
        let z = PotentialSpec::central(2, 3.0, 0.0);
        assert_eq!(z.evaluate(&[0.3, -7.0]).unwrap(), 0.0);
        assert_eq!(z.gradient(&[0.3, -7.0]).unwrap(), vec![0.0, 0.0]);
        let f = s.with_profile(AngularProfile::Fourier {
            a0: 1.0,
            cos: vec![0.5],
            sin: vec![],
        });
        assert!((f.evaluate(&[0.0, 2.0]).unwrap() - 0.125).abs() < 1e-16);
    }

    #[test]
    fn origin_guard() {
        let s = PotentialSpec::central(3, 3.5, 1.0);
        assert!(matches!(
            s.evaluate(&[0.0, 0.0, 1e-7]),
            Err(PotentialError::PointAtOrigin { .. })
        ));
    }

    #[test]
    fn energy_normalization() {
        let s = PotentialSpec::central(2, 3.0, 1.0).with_energy(4.0);
        let (n, h) = normalize_energy(&s, 0.2).unwrap();
        assert_eq!((n.strength, n.energy, h), (0.25, 1.0, 0.1));
        let (n2, h2) = normalize_energy(&n, h).unwrap();
        assert_eq!((n2, h2), (n.clone(), h));
        assert!(normalize_energy(&s.clone().with_energy(0.0), 0.1).is_err());
        assert!(normalize_energy(&s, -1.0).is_err());
    }

    #[test]
    fn decay_examples() {
        let radii: Vec<f64> = (0..=30).map(|i| 10f64.powf(1.0 + 0.1 * i as f64)).collect();
        let z = PotentialSpec::central(2, 3.0, 1.0);
        let rep = check_symbol_decay(&z, &radii, 3).unwrap();
        assert!(rep.pass && rep.orders.iter().all(|o| o.exponent == f64::NEG_INFINITY));
        let w = z.clone().with_correction(Correction {
            epsilon: 1.0,
            terms: vec![CorrectionTerm::Power {
                coeff: 1.0,
                exponent: 4.0,
            }],
        });
        let rep = check_symbol_decay(&w, &radii, 2).unwrap();
        assert!((rep.orders[0].exponent + 4.0).abs() < 1e-10 && rep.pass);
        let bad = z.with_correction(Correction {
            epsilon: 1.0,
            terms: vec![CorrectionTerm::PowerSinLog {
                coeff: 1.0,
                exponent: 3.0,
            }],
        });
        let rep = check_symbol_decay(&bad, &radii, 2).unwrap();
        assert!(!rep.orders[0].pass);
        assert!(check_symbol_decay(&w, &[1.0, 2.0, 3.0], 1).is_err());
    }

    #[test]
    fn sin_log_derivative_matches_difference() {
        let t = CorrectionTerm::PowerSinLog {
            coeff: 2.0,
            exponent: 3.0,
        };
        let r = 3.7;
        let fd = (t.radial_derivative(r + 1e-5, 0) - t.radial_derivative(r - 1e-5, 0)) / 2e-5;
        assert!((fd - t.radial_derivative(r, 1)).abs() < 1e-8);
    }
}
