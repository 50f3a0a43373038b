//! The phase coefficient `g` recovered from exact phase shifts.

use serde::{Deserialize, Serialize};

use super::{PartialWaveError, PhaseShiftTable, ShiftSource};
use crate::numerics::fit::line_fit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumG {
    pub g: f64,
    pub stderr: f64,
    pub points: usize,
    pub b_range: (f64, f64),
}

/// Fits `2hδ b^{α-1} = g + g₁ b^{-κ}` over exact entries with `b ≥ b_lo`.
pub fn quantum_g_fit(table: &PhaseShiftTable, b_lo: f64) -> Result<QuantumG, PartialWaveError> {
    let spec = &table.spec;
    if spec.is_zero() {
        return Ok(QuantumG {
            g: 0.0,
            stderr: 0.0,
            points: 0,
            b_range: (b_lo, b_lo),
        });
    }
    let alpha = spec.alpha;
    let kappa = alpha.min(spec.epsilon());
    let pts: Vec<(f64, f64)> = table
        .exact
        .iter()
        .filter(|e| e.method == ShiftSource::Exact && e.b >= b_lo)
        .map(|e| {
            (
                e.b.powf(-kappa),
                2.0 * table.h * e.delta * e.b.powf(alpha - 1.0),
            )
        })
        .collect();
    if pts.len() < 3 {
        return Err(PartialWaveError::Invalid(format!(
            "fewer than 3 exact entries with b >= {b_lo}"
        )));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let f = line_fit(&x, &y).ok_or_else(|| PartialWaveError::Invalid("degenerate fit".into()))?;
    let b_hi = table.exact.last().map_or(b_lo, |e| e.b);
    Ok(QuantumG {
        g: f.intercept,
        stderr: f.intercept_stderr,
        points: pts.len(),
        b_range: (b_lo, b_hi),
    })
}
