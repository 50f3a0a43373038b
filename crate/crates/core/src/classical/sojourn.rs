//! Large-impact asymptotics of the scattering map and the phase coefficient `g`.

use serde::{Deserialize, Serialize};

use super::trajectory::{dot, norm, scatter_ray, ScatterEvent, TrajectoryOptions};
use super::ClassicalError;
use crate::numerics::fit::{line_fit, power_law_fit, LineFit};
use crate::potential::PotentialSpec;

/// Values below this are treated as exactly zero in the fits.
const SHIFT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftFit {
    /// Fitted power of `|η'|`; `-inf` when every shift is below the floor.
    pub exponent: f64,
    pub correlation: f64,
    /// Signed leading coefficient at the theoretical exponent.
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SojournFitReport {
    pub impacts: Vec<f64>,
    /// Angular position shift `|ω - ω'|`, expected `-α`.
    pub position: ShiftFit,
    /// `|η - η'|`, expected `1 - α`.
    pub momentum: ShiftFit,
    /// `|φ|`, expected `1 - α`.
    pub phi: ShiftFit,
}

fn zero_fit() -> ShiftFit {
    ShiftFit {
        exponent: f64::NEG_INFINITY,
        correlation: 1.0,
        coefficient: 0.0,
    }
}

/// Intercept of `y b^{-p}` against `b^{-κ}`.
fn leading_coefficient(b: &[f64], y: &[f64], p: f64, kappa: f64) -> f64 {
    let xs: Vec<f64> = b.iter().map(|v| v.powf(-kappa)).collect();
    let ys: Vec<f64> = b.iter().zip(y).map(|(bv, yv)| yv * bv.powf(-p)).collect();
    line_fit(&xs, &ys).map_or(ys[ys.len() - 1], |f| f.intercept)
}

fn shift_fit(
    b: &[f64],
    signed: &[f64],
    p: f64,
    kappa: f64,
    min_corr: f64,
) -> Result<ShiftFit, ClassicalError> {
    if signed.iter().all(|v| v.abs() < SHIFT_FLOOR) {
        return Ok(zero_fit());
    }
    let f: LineFit = power_law_fit(b, signed).ok_or(ClassicalError::FitCorrelation(0.0))?;
    if f.correlation.abs() < min_corr {
        return Err(ClassicalError::FitCorrelation(f.correlation));
    }
    Ok(ShiftFit {
        exponent: f.slope,
        correlation: f.correlation,
        coefficient: leading_coefficient(b, signed, p, kappa),
    })
}

/// Fits the decay of the shifts over a ray family with fixed `ω'`, `η̂'`.
pub fn fit_sojourn_asymptotics(
    events: &[ScatterEvent],
    alpha: f64,
    epsilon: f64,
) -> Result<SojournFitReport, ClassicalError> {
    if events.len() < 5 {
        return Err(ClassicalError::Invalid("need at least 5 events".into()));
    }
    let b: Vec<f64> = events.iter().map(|e| e.impact()).collect();
    if b.windows(2).any(|w| !(w[1] > w[0])) || b[b.len() - 1] / b[0] < 99.0 {
        return Err(ClassicalError::Invalid(
            "impacts must increase and span two decades".into(),
        ));
    }
    let kappa = alpha.min(epsilon);
    let mut pos = Vec::new();
    let mut mom = Vec::new();
    let mut phi = Vec::new();
    for e in events {
        let eh: Vec<f64> = e.eta_in.iter().map(|v| v / e.impact()).collect();
        let dw: Vec<f64> = e
            .omega_out
            .iter()
            .zip(&e.omega_in)
            .map(|(a, b)| a - b)
            .collect();
        let de: Vec<f64> = e
            .eta_out
            .iter()
            .zip(&e.eta_in)
            .map(|(a, b)| a - b)
            .collect();
        let s = if dot(&dw, &eh) < 0.0 { -1.0 } else { 1.0 };
        pos.push(s * norm(&dw));
        let s = if dot(&de, &e.omega_in) < 0.0 {
            -1.0
        } else {
            1.0
        };
        mom.push(s * norm(&de));
        phi.push(e.phi);
    }
    Ok(SojournFitReport {
        impacts: b.clone(),
        position: shift_fit(&b, &pos, -alpha, kappa, 0.999)?,
        momentum: shift_fit(&b, &mom, 1.0 - alpha, kappa, 0.999)?,
        phi: shift_fit(&b, &phi, 1.0 - alpha, kappa, 0.999)?,
    })
}

/// Which asymptotic impact vector multiplies the direction change in `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parametrization {
    Incoming,
    Outgoing,
}

/// `G = φ + (ω - ω')·η'` (or `·η` for the outgoing parametrization).
pub fn phase_function(e: &ScatterEvent, p: Parametrization) -> f64 {
    let dw: Vec<f64> = e
        .omega_out
        .iter()
        .zip(&e.omega_in)
        .map(|(a, b)| a - b)
        .collect();
    let eta = match p {
        Parametrization::Incoming => &e.eta_in,
        Parametrization::Outgoing => &e.eta_out,
    };
    e.phi + dot(&dw, eta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GFit {
    pub g: f64,
    pub stderr: f64,
    /// Same coefficient from the outgoing parametrization.
    pub g_outgoing: f64,
    pub impacts: Vec<f64>,
    pub phase: Vec<f64>,
}

/// Default ray family for `g`: impacts `10·2^{k/2}`, `k = 0..8`.
pub fn default_g_impacts() -> Vec<f64> {
    (0..9).map(|k| 10.0 * 2f64.powf(0.5 * k as f64)).collect()
}

fn extrapolate(b: &[f64], g: &[f64], alpha: f64, kappa: f64) -> (f64, f64) {
    let xs: Vec<f64> = b.iter().map(|v| v.powf(-kappa)).collect();
    let ys: Vec<f64> = b
        .iter()
        .zip(g)
        .map(|(bv, gv)| gv * bv.powf(alpha - 1.0))
        .collect();
    match line_fit(&xs, &ys) {
        Some(f) => (f.intercept, f.intercept_stderr),
        None => (ys[0], f64::INFINITY),
    }
}

/// Fits `G(b) b^{α-1} = g + g₁ b^{-κ}` over a ray family.
pub fn classical_g_fit(
    spec: &PotentialSpec,
    omega_in: &[f64],
    eta_hat: &[f64],
    impacts: &[f64],
    opts: &TrajectoryOptions,
) -> Result<GFit, ClassicalError> {
    if spec.is_zero() {
        return Ok(GFit {
            g: 0.0,
            stderr: 0.0,
            g_outgoing: 0.0,
            impacts: impacts.to_vec(),
            phase: vec![0.0; impacts.len()],
        });
    }
    let events = impacts
        .iter()
        .map(|&b| {
            let eta: Vec<f64> = eta_hat.iter().map(|v| v * b).collect();
            scatter_ray(spec, omega_in, &eta, opts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let kappa = spec.alpha.min(spec.epsilon());
    let gi: Vec<f64> = events
        .iter()
        .map(|e| phase_function(e, Parametrization::Incoming))
        .collect();
    let go: Vec<f64> = events
        .iter()
        .map(|e| phase_function(e, Parametrization::Outgoing))
        .collect();
    let (g, stderr) = extrapolate(impacts, &gi, spec.alpha, kappa);
    let (g_outgoing, _) = extrapolate(impacts, &go, spec.alpha, kappa);
    if g != 0.0 && stderr > 0.02 * g.abs() {
        return Err(ClassicalError::FitError(stderr / g.abs()));
    }
    Ok(GFit {
        g,
        stderr,
        g_outgoing,
        impacts: impacts.to_vec(),
        phase: gi,
    })
}

/// Leading coefficient `g(ω', η̂')` of the phase function.
pub fn classical_g(
    spec: &PotentialSpec,
    omega_in: &[f64],
    eta_hat: &[f64],
    opts: &TrajectoryOptions,
) -> Result<f64, ClassicalError> {
    Ok(classical_g_fit(spec, omega_in, eta_hat, &default_g_impacts(), opts)?.g)
}
