//! The atomic measure `μ_h` on the circle built from a phase-shift table.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{expm1_i, gamma_exponent, SpectralError, TWO_PI};
use crate::numerics::sum::{ComplexSum, NeumaierSum};
use crate::partial_waves::PhaseShiftTable;

/// Atoms `(2δ mod 2π, h^{αγ}·mult)`; the eikonal atoms are produced lazily.
#[derive(Debug, Clone, Copy)]
pub struct AtomicCircleMeasure<'a> {
    pub table: &'a PhaseShiftTable,
    pub h: f64,
    /// `αγ`.
    pub scaling_exponent: f64,
    /// `h^{αγ}`.
    pub weight_scale: f64,
    /// Table tail bound times `h^{αγ}`.
    pub tail_bound: f64,
}

fn angle(delta: f64) -> f64 {
    let a = (2.0 * delta).rem_euclid(TWO_PI);
    if a >= TWO_PI {
        0.0
    } else {
        a
    }
}

impl AtomicCircleMeasure<'_> {
    /// `(angle, weight)` in increasing `ℓ`.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.table
            .iter()
            .map(move |e| (angle(e.delta), self.weight_scale * e.mult as f64))
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }
}

pub fn build_mu_h(
    table: &PhaseShiftTable,
    alpha: f64,
) -> Result<AtomicCircleMeasure<'_>, SpectralError> {
    let (g, _) = gamma_exponent(table.d, alpha)?;
    let s = alpha * g;
    let w = table.h.powf(s);
    Ok(AtomicCircleMeasure {
        table,
        h: table.h,
        scaling_exponent: s,
        weight_scale: w,
        tail_bound: w * table.tail_bound,
    })
}

/// `Tr(S_h^k - I) = Σ mult (e^{2ikδ} - 1)` plus the linearized tail.
pub fn trace_power(table: &PhaseShiftTable, k: i64) -> Result<Complex64, SpectralError> {
    if k == 0 {
        return Err(SpectralError::Invalid("k must be nonzero".into()));
    }
    let kf = k as f64;
    let mut sum = ComplexSum::new();
    table.for_each_shift(|m, d| sum.add(expm1_i(2.0 * kf * d) * m));
    // Linearize beyond the table; when |k δ| is not small, sum more terms first.
    let mut tail_sum = table.tail_sum;
    if let Some(l_max) = table.l_max {
        let mut l = l_max;
        while (kf * table.eikonal_delta(l + 1)).abs() > 1e-9 {
            l += 1;
            let d = table.eikonal_delta(l);
            sum.add(expm1_i(2.0 * kf * d) * crate::partial_waves::multiplicity(l, table.d) as f64);
        }
        if l != l_max {
            tail_sum = table.tail_sums_after(l).1;
        }
    }
    sum.add(Complex64::new(0.0, 2.0 * kf * tail_sum));
    Ok(sum.value())
}

/// `|k| Σ mult |e^{2iδ} - 1| + |k|·tail bound`, which dominates `|trace_power(k)|`.
pub fn trace_power_bound(table: &PhaseShiftTable, k: i64) -> f64 {
    let mut s = NeumaierSum::new();
    table.for_each_shift(|m, d| s.add(m * 2.0 * d.sin().abs()));
    k.unsigned_abs() as f64 * (s.value() + table.tail_bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub value: Complex64,
    /// Bound on the pairing with the atoms beyond the table.
    pub tail_bound: f64,
    /// Largest `|f(z)/(z-1)|` seen on the atoms.
    pub max_ratio: f64,
}

/// `⟨μ_h, f⟩` for `f` with declared weighted norm `sup |f(z)/(z-1)|`.
pub fn mu_pair(
    measure: &AtomicCircleMeasure,
    f: &dyn Fn(Complex64) -> Complex64,
    norm_w: f64,
) -> Result<PairResult, SpectralError> {
    let mut sum = ComplexSum::new();
    let mut max_ratio: f64 = 0.0;
    for (a, w) in measure.atoms() {
        let z = Complex64::from_polar(1.0, a);
        let fz = f(z);
        let zm1 = expm1_i(a);
        if zm1.norm() > 0.0 {
            max_ratio = max_ratio.max(fz.norm() / zm1.norm());
        } else if fz.norm() > 0.0 {
            return Err(SpectralError::UnboundedWeight(f64::INFINITY));
        }
        sum.add(fz * w);
    }
    if max_ratio > norm_w * (1.0 + 1e-9) + 1e-12 {
        return Err(SpectralError::UnboundedWeight(max_ratio));
    }
    Ok(PairResult {
        value: sum.value(),
        tail_bound: norm_w * measure.tail_bound,
        max_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorCount {
    /// Eigenvalues (with multiplicity) with angle in `[φ₀, φ₁]`.
    pub count: f64,
    /// `h^{αγ}·count`.
    pub scaled: f64,
}

fn check_sector(phi0: f64, phi1: f64) -> Result<(), SpectralError> {
    if !(0.0 < phi0 && phi0 < phi1 && phi1 < TWO_PI) {
        return Err(SpectralError::BadSector(phi0, phi1));
    }
    Ok(())
}

pub fn sector_count(
    table: &PhaseShiftTable,
    phi0: f64,
    phi1: f64,
    alpha: f64,
) -> Result<SectorCount, SpectralError> {
    check_sector(phi0, phi1)?;
    let (g, _) = gamma_exponent(table.d, alpha)?;
    let inside = |d: f64| {
        let a = angle(d);
        a >= phi0 && a <= phi1
    };
    let mut n: u64 = table
        .exact
        .iter()
        .filter(|e| inside(e.delta))
        .map(|e| e.mult)
        .sum();
    // Eikonal angles shrink monotonically; skip them when the largest is outside.
    let start = table.eikonal_start();
    if table.eikonal_len() > 0 && 2.0 * table.eikonal_delta(start).abs() >= phi0.min(TWO_PI - phi1)
    {
        n += table
            .iter()
            .filter(|e| e.l >= start && inside(e.delta))
            .map(|e| e.mult)
            .sum::<u64>();
    }
    let count = n as f64;
    Ok(SectorCount {
        count,
        scaled: count * table.h.powf(alpha * g),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusCount {
    pub p: u32,
    /// Eigenvalues with `|e^{2iδ} - 1| ∈ (2^{-p}, 2^{1-p}]`.
    pub count: f64,
    /// `count·2^{-pγ}·h^{αγ}`.
    pub c_p: f64,
}

fn annulus_index(dist: f64) -> Option<u32> {
    if !(dist > 0.0) {
        return None;
    }
    let p = (-dist.log2()).floor() + 1.0;
    Some(p.max(0.0) as u32)
}

pub fn dyadic_annulus_counts(
    table: &PhaseShiftTable,
    alpha: f64,
    p_max: u32,
) -> Result<Vec<AnnulusCount>, SpectralError> {
    let (g, _) = gamma_exponent(table.d, alpha)?;
    let mut counts = vec![0u64; p_max as usize + 1];
    let mut add = |delta: f64, mult: u64| {
        if let Some(p) = annulus_index(2.0 * delta.sin().abs()) {
            if p <= p_max {
                counts[p as usize] += mult;
            }
        }
    };
    for e in &table.exact {
        add(e.delta, e.mult);
    }
    if !table.is_empty() {
        // Past the exact part the distances decrease; stop below the last annulus.
        let floor = 2f64.powi(-(p_max as i32));
        let mut l = table.eikonal_start();
        loop {
            let d = table.eikonal_delta(l);
            if 2.0 * d.sin().abs() <= floor {
                break;
            }
            add(d, crate::partial_waves::multiplicity(l, table.d));
            l += 1;
        }
    }
    let hs = table.h.powf(alpha * g);
    Ok(counts
        .iter()
        .enumerate()
        .map(|(p, &c)| AnnulusCount {
            p: p as u32,
            count: c as f64,
            c_p: c as f64 * 2f64.powf(-(p as f64) * g) * hs,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_boundaries() {
        assert_eq!(annulus_index(0.3), Some(2));
        assert_eq!(annulus_index(0.5), Some(2));
        assert_eq!(annulus_index(2.0), Some(0));
        assert_eq!(annulus_index(1.0), Some(1));
        assert_eq!(annulus_index(0.0), None);
    }
}
