//! Hybrid phase-shift table: exact shifts up to a crossover, eikonal shifts
//! (evaluated lazily) up to a floor, and a closed-form bound beyond.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eikonal::{eikonal_phase, power_line_constant};
use super::solver::{phase_shift_nu, SolverOptions};
use super::{bessel_order, multiplicity, PartialWaveError};
use crate::numerics::quadrature::integrate_to_infinity;
use crate::potential::PotentialSpec;
use crate::special::hurwitz_zeta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TableOptions {
    /// Eikonal values are never used below this impact parameter.
    pub b_min: f64,
    /// Crossover when `|δ_exact - δ_eik| < crossover_rel·|δ|`...
    pub crossover_rel: f64,
    /// ...for this many consecutive `ℓ`.
    pub crossover_run: usize,
    /// Eikonal entries stop once `|δ| < delta_floor`.
    pub delta_floor: f64,
    /// Hard cap on exact solves when no crossover is found.
    pub exact_cap: u64,
    /// Exact shifts are computed in ordered parallel batches of this size.
    pub batch: usize,
    pub solver: SolverOptions,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            b_min: 2.0,
            crossover_rel: 1e-4,
            crossover_run: 3,
            delta_floor: 1e-9,
            exact_cap: 100_000,
            batch: 64,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftSource {
    Exact,
    Eikonal,
}

impl ShiftSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ShiftSource::Exact => "exact",
            ShiftSource::Eikonal => "eikonal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftEntry {
    pub l: u64,
    pub nu: f64,
    pub b: f64,
    pub delta: f64,
    pub method: ShiftSource,
    pub mult: u64,
}

/// Fast evaluation of `δ_eik(ℓ)`.
#[derive(Debug, Clone, PartialEq)]
enum Eikonal {
    /// `δ = Σ A ν^{1-p}` over `(A, p)`.
    Power(Vec<(f64, f64)>),
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftTable {
    pub spec: PotentialSpec,
    pub h: f64,
    pub d: usize,
    pub exact: Vec<PhaseShiftEntry>,
    /// Largest exact `ℓ` once the crossover criterion held; `None` if never.
    pub l_star: Option<u64>,
    /// `|δ_exact - δ_eik|/|δ|` at `ℓ*`.
    pub crossover_error: f64,
    /// Last tabulated `ℓ`; `None` for an empty table.
    pub l_max: Option<u64>,
    /// `Σ_{ℓ > ℓ_max} mult·2|δ_eik(ℓ)|`.
    pub tail_bound: f64,
    /// `Σ_{ℓ > ℓ_max} mult·δ_eik(ℓ)`.
    pub tail_sum: f64,
    /// Largest variable-phase/Numerov gap over the exact entries.
    pub max_method_gap: f64,
    pub delta_floor: f64,
    eikonal: Eikonal,
}

impl PhaseShiftTable {
    /// Number of entries.
    pub fn len(&self) -> u64 {
        self.exact.len() as u64 + self.eikonal_len()
    }

    pub fn is_empty(&self) -> bool {
        self.l_max.is_none()
    }

    pub fn eikonal_delta(&self, l: u64) -> f64 {
        let nu = bessel_order(l, self.d);
        match &self.eikonal {
            Eikonal::Power(terms) => terms.iter().map(|&(a, p)| a * nu.powf(1.0 - p)).sum(),
            Eikonal::Numeric => eikonal_phase(&self.spec, nu * self.h) / (2.0 * self.h),
        }
    }

    /// First `ℓ` served by the eikonal segment.
    pub fn eikonal_start(&self) -> u64 {
        self.exact.last().map_or(0, |e| e.l + 1)
    }

    fn eikonal_entry(&self, l: u64) -> PhaseShiftEntry {
        let nu = bessel_order(l, self.d);
        PhaseShiftEntry {
            l,
            nu,
            b: nu * self.h,
            delta: self.eikonal_delta(l),
            method: ShiftSource::Eikonal,
            mult: multiplicity(l, self.d),
        }
    }

    pub fn entry(&self, l: u64) -> Option<PhaseShiftEntry> {
        if l < self.eikonal_start() {
            return self
                .exact
                .binary_search_by_key(&l, |e| e.l)
                .ok()
                .map(|i| self.exact[i]);
        }
        match self.l_max {
            Some(m) if l <= m => Some(self.eikonal_entry(l)),
            _ => None,
        }
    }

    /// Entries in increasing `ℓ`; the eikonal part is generated on the fly.
    pub fn iter(&self) -> impl Iterator<Item = PhaseShiftEntry> + '_ {
        let end = self.l_max.map_or(0, |m| m + 1);
        self.exact.iter().copied().chain(
            (self.eikonal_start()..end.max(self.eikonal_start()))
                .map(move |l| self.eikonal_entry(l)),
        )
    }

    /// Calls `f(mult, δ)` in increasing `ℓ` without building entries.
    pub fn for_each_shift<F: FnMut(f64, f64)>(&self, mut f: F) {
        for e in &self.exact {
            f(e.mult as f64, e.delta);
        }
        let Some(l_max) = self.l_max else { return };
        for l in self.eikonal_start()..=l_max {
            f(multiplicity(l, self.d) as f64, self.eikonal_delta(l));
        }
    }

    /// Number of eikonal entries.
    pub fn eikonal_len(&self) -> u64 {
        self.l_max
            .map_or(0, |m| (m + 1).saturating_sub(self.eikonal_start()))
    }

    /// `(Σ mult·2|δ_eik|, Σ mult·δ_eik)` over `ℓ > l`.
    pub fn tail_sums_after(&self, l: u64) -> (f64, f64) {
        if self.spec.is_zero() {
            return (0.0, 0.0);
        }
        tail_sums(&self.spec, &self.eikonal, self.h, self.d, l)
    }

    /// A table holding exactly the given `(ℓ, δ, mult)` entries, with no eikonal part or tail.
    pub fn from_entries(h: f64, d: usize, entries: &[(u64, f64, u64)]) -> PhaseShiftTable {
        let mut exact: Vec<PhaseShiftEntry> = entries
            .iter()
            .map(|&(l, delta, mult)| {
                let nu = bessel_order(l, d);
                PhaseShiftEntry {
                    l,
                    nu,
                    b: nu * h,
                    delta,
                    method: ShiftSource::Exact,
                    mult,
                }
            })
            .collect();
        exact.sort_by_key(|e| e.l);
        PhaseShiftTable {
            spec: PotentialSpec::central(d, d as f64 + 1.0, 0.0),
            h,
            d,
            l_star: exact.last().map(|e| e.l),
            l_max: exact.last().map(|e| e.l),
            exact,
            crossover_error: f64::NAN,
            tail_bound: 0.0,
            tail_sum: 0.0,
            max_method_gap: 0.0,
            delta_floor: 0.0,
            eikonal: Eikonal::Power(Vec::new()),
        }
    }

    /// Largest `|δ|` beyond the table.
    pub fn max_tail_delta(&self) -> f64 {
        match self.l_max {
            None => 0.0,
            Some(l) => self.eikonal_delta(l + 1).abs(),
        }
    }
}

/// Coefficients of `mult(ℓ, d)` as a polynomial in `ν`, lowest degree first.
fn multiplicity_polynomial(d: usize) -> Vec<f64> {
    if d == 2 {
        return vec![2.0];
    }
    // 2ν Π_{j=1}^{d-3} (ν - (d-2)/2 + j) / (d-2)!
    let mut poly = vec![0.0, 2.0];
    let shift = (d as f64 - 2.0) / 2.0;
    for j in 1..=(d - 3) {
        let a = j as f64 - shift;
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += a * c;
            next[i + 1] += c;
        }
        poly = next;
    }
    let fact: f64 = (1..=(d - 2)).map(|i| i as f64).product();
    poly.iter().map(|c| c / fact).collect()
}

/// `(Σ mult·2|δ|, Σ mult·δ)` over `ℓ > l_max`.
fn tail_sums(spec: &PotentialSpec, eik: &Eikonal, h: f64, d: usize, l_max: u64) -> (f64, f64) {
    let nu0 = bessel_order(l_max + 1, d);
    match eik {
        Eikonal::Power(terms) => {
            let poly = multiplicity_polynomial(d);
            let mut bound = 0.0;
            let mut signed = 0.0;
            for &(a, p) in terms {
                for (m, c) in poly.iter().enumerate() {
                    let z = hurwitz_zeta(p - 1.0 - m as f64, nu0);
                    bound += 2.0 * (a * c).abs() * z;
                    signed += a * c * z;
                }
            }
            (bound, signed)
        }
        Eikonal::Numeric => {
            // Decreasing summands: Σ_{ℓ>L} f(ℓ) ≤ ∫_L^∞ f.
            let f = |l: f64| {
                let nu = l + (d as f64 - 2.0) / 2.0;
                let poly = multiplicity_polynomial(d);
                let mult: f64 = poly
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * nu.powi(m as i32))
                    .sum();
                mult * eikonal_phase(spec, nu * h) / (2.0 * h)
            };
            let a = (l_max) as f64;
            let bound =
                integrate_to_infinity(|l: f64| 2.0 * f(l).abs(), a, 1e-300, 1e-8, 500).value;
            let signed = integrate_to_infinity(f, a + 0.5, 1e-300, 1e-8, 500).value;
            (bound, signed)
        }
    }
}

fn eikonal_for(spec: &PotentialSpec, h: f64) -> Eikonal {
    match spec.power_terms() {
        Some(terms) => Eikonal::Power(
            terms
                .iter()
                .filter(|t| t.0 != 0.0)
                .map(|&(c, p)| {
                    (
                        -0.5 * c * h.powf(1.0 - p) * power_line_constant(p) / (2.0 * h),
                        p,
                    )
                })
                .collect(),
        ),
        None => Eikonal::Numeric,
    }
}

/// Builds the hybrid table for a central potential at unit energy.
pub fn build_table(
    spec: &PotentialSpec,
    h: f64,
    opts: &TableOptions,
) -> Result<PhaseShiftTable, PartialWaveError> {
    if spec.central_coefficient().is_none() {
        return Err(PartialWaveError::NotCentral);
    }
    if !(h > 0.0) {
        return Err(PartialWaveError::Invalid("h must be positive".into()));
    }
    let d = spec.dimension;
    let eikonal = eikonal_for(spec, h);
    let mut table = PhaseShiftTable {
        spec: spec.clone(),
        h,
        d,
        exact: Vec::new(),
        l_star: None,
        crossover_error: f64::NAN,
        l_max: None,
        tail_bound: 0.0,
        tail_sum: 0.0,
        max_method_gap: 0.0,
        delta_floor: opts.delta_floor,
        eikonal,
    };
    if spec.is_zero() {
        return Ok(table);
    }

    let mut run = 0usize;
    let mut below_floor = 0usize;
    let mut next: u64 = 0;
    'outer: while next < opts.exact_cap {
        let end = (next + opts.batch as u64).min(opts.exact_cap);
        let batch: Vec<_> = (next..end)
            .into_par_iter()
            .map(|l| phase_shift_nu(spec, bessel_order(l, d), h, &opts.solver).map(|s| (l, s)))
            .collect::<Result<Vec<_>, _>>()?;
        for (l, s) in batch {
            let nu = bessel_order(l, d);
            let b = nu * h;
            table.max_method_gap = table.max_method_gap.max((s.delta - s.delta_numerov).abs());
            table.exact.push(PhaseShiftEntry {
                l,
                nu,
                b,
                delta: s.delta,
                method: ShiftSource::Exact,
                mult: multiplicity(l, d),
            });
            if b >= opts.b_min {
                let de = table.eikonal_delta(l);
                let rel = (s.delta - de).abs() / s.delta.abs();
                run = if rel < opts.crossover_rel { run + 1 } else { 0 };
                below_floor = if s.delta.abs() < opts.delta_floor {
                    below_floor + 1
                } else {
                    0
                };
                if run >= opts.crossover_run || below_floor >= opts.crossover_run {
                    table.l_star = Some(l);
                    table.crossover_error = rel;
                    break 'outer;
                }
            }
        }
        next = end;
    }
    let last_exact = table
        .exact
        .last()
        .map(|e| e.l)
        .expect("at least one exact entry");
    if table.l_star.is_none() {
        log::warn!(
            "no eikonal crossover below l = {}; table is exact up to the cap",
            opts.exact_cap
        );
    }

    // ℓ_max: last ℓ with |δ_eik| ≥ floor (monotone beyond the crossover).
    let floor_ok = |l: u64| table.eikonal_delta(l).abs() >= opts.delta_floor;
    let l_max = if !floor_ok(last_exact + 1) {
        last_exact
    } else {
        let mut lo = last_exact + 1;
        let mut hi = lo.max(1) * 2;
        while floor_ok(hi) {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if floor_ok(mid) {
                lo = mid
            } else {
                hi = mid
            }
        }
        lo
    };
    table.l_max = Some(l_max);
    let (bound, signed) = tail_sums(spec, &table.eikonal, h, d, l_max);
    table.tail_bound = bound;
    table.tail_sum = signed;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_polynomial_matches_counts() {
        for d in 2..7 {
            let p = multiplicity_polynomial(d);
            for l in 1..20u64 {
                let nu = bessel_order(l, d);
                let v: f64 = p
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * nu.powi(m as i32))
                    .sum();
                assert!((v - multiplicity(l, d) as f64).abs() < 1e-9, "d={d} l={l}");
            }
        }
    }
}
