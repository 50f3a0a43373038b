//! `h → 0` convergence of traces and sector counts towards the limit measure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    predicted_sector_mass, sector_count, trace_power, HomogeneousMeasureParams, SpectralError,
};
use crate::numerics::fit::{power_law_fit, richardson};
use crate::partial_waves::PhaseShiftTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceOptions {
    pub k_max: u32,
    pub sectors: Vec<(f64, f64)>,
    /// Relative tolerance of the extrapolated trace limits.
    pub trace_tol: f64,
    /// Relative tolerance of scaled sector counts at the smallest `h`.
    pub sector_tol: f64,
    /// Allowed deviation of the counting exponent from `-αγ`.
    pub slope_tol: f64,
    /// Error exponent for the extrapolation; derived from the potential when absent.
    pub richardson_order: Option<f64>,
    /// Relative size below which non-monotone convergence is ignored.
    pub noise_floor: f64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        let pi = std::f64::consts::PI;
        ConvergenceOptions {
            k_max: 4,
            sectors: vec![
                (0.5 * pi, 1.5 * pi),
                (0.25 * pi, 0.75 * pi),
                (1.25 * pi, 1.75 * pi),
            ],
            trace_tol: 0.10,
            sector_tol: 0.15,
            slope_tol: 0.1,
            richardson_order: None,
            noise_floor: 1e-3,
        }
    }
}

/// Error exponent `min(ε, d-1)/(α-1)` of the scaled traces in `h`.
pub fn convergence_order(d: usize, alpha: f64, epsilon: f64) -> f64 {
    epsilon.min(d as f64 - 1.0) / (alpha - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub h: f64,
    pub k: i64,
    pub trace: Complex64,
    pub scaled: Complex64,
    pub predicted: Complex64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLimit {
    pub k: i64,
    pub limit: Complex64,
    pub predicted: Complex64,
    pub rel_err: f64,
    /// Distance to the prediction shrinks along the sweep (up to the noise floor).
    /// Reported separately from `pass`.
    pub monotone: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRow {
    pub h: f64,
    pub phi0: f64,
    pub phi1: f64,
    pub count: f64,
    pub scaled: f64,
    pub predicted: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSummary {
    pub phi0: f64,
    pub phi1: f64,
    /// Slope of `log N` against `log h`.
    pub slope: f64,
    pub slope_pass: bool,
    pub rel_err: f64,
    pub mass_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub order: f64,
    pub scaling_exponent: f64,
    pub traces: Vec<TraceRow>,
    pub limits: Vec<TraceLimit>,
    pub sectors: Vec<SectorRow>,
    pub sector_summaries: Vec<SectorSummary>,
    /// `Tr(S^{-k} - I)` is the exact conjugate of `Tr(S^k - I)` at every `h`.
    pub conjugate_pairs: bool,
    pub pass: bool,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    if b.norm() == 0.0 {
        a.norm()
    } else {
        (a - b).norm() / b.norm()
    }
}

fn rel_real(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Compares a sweep of tables (decreasing `h`) with the predicted limit.
pub fn convergence_report(
    sweep: &[&PhaseShiftTable],
    params: &HomogeneousMeasureParams,
    epsilon: f64,
    opts: &ConvergenceOptions,
) -> Result<ConvergenceReport, SpectralError> {
    if sweep.len() < 3 {
        return Err(SpectralError::Sweep(3));
    }
    let hs: Vec<f64> = sweep.iter().map(|t| t.h).collect();
    let ratio = hs[0] / hs[1];
    if hs
        .windows(2)
        .any(|w| !(w[1] < w[0]) || ((w[0] / w[1]) / ratio - 1.0).abs() > 1e-9)
    {
        return Err(SpectralError::Invalid(
            "h values must decrease geometrically".into(),
        ));
    }
    let alpha = params.alpha;
    let s = alpha * params.gamma;
    let order = opts
        .richardson_order
        .unwrap_or_else(|| convergence_order(params.d, alpha, epsilon));

    let mut traces = Vec::new();
    let mut conjugate_pairs = true;
    let mut limits = Vec::new();
    for k in 1..=opts.k_max as i64 {
        let mut scaled_k = Vec::new();
        for t in sweep {
            let w = t.h.powf(s);
            let tp = trace_power(t, k)?;
            let tm = trace_power(t, -k)?;
            conjugate_pairs &= tm == tp.conj();
            for (kk, tr) in [(k, tp), (-k, tm)] {
                let pred = params.predicted_trace(kk);
                traces.push(TraceRow {
                    h: t.h,
                    k: kk,
                    trace: tr,
                    scaled: tr * w,
                    predicted: pred,
                    rel_err: rel(tr * w, pred),
                });
            }
            scaled_k.push(tp * w);
        }
        let n = scaled_k.len();
        let ex = |i: usize| {
            Complex64::new(
                richardson(scaled_k[i].re, scaled_k[i + 1].re, ratio, order),
                richardson(scaled_k[i].im, scaled_k[i + 1].im, ratio, order),
            )
        };
        let limit = ex(n - 2);
        let predicted = params.predicted_trace(k);
        let dist: Vec<f64> = scaled_k.iter().map(|v| (v - predicted).norm()).collect();
        let noise = opts.noise_floor * predicted.norm();
        let monotone = dist.windows(2).all(|w| w[1] <= w[0] + noise);
        if !monotone {
            log::warn!(
                "scaled trace for k = {k} does not approach the prediction monotonically: {dist:?}"
            );
        }
        let rel_err = rel(limit, predicted);
        let pass = rel_err <= opts.trace_tol;
        limits.push(TraceLimit {
            k,
            limit,
            predicted,
            rel_err,
            monotone,
            pass,
        });
        let lc = limit.conj();
        limits.push(TraceLimit {
            k: -k,
            limit: lc,
            predicted: params.predicted_trace(-k),
            rel_err: rel(lc, params.predicted_trace(-k)),
            monotone,
            pass,
        });
    }

    let mut sectors = Vec::new();
    let mut sector_summaries = Vec::new();
    for &(p0, p1) in &opts.sectors {
        let predicted = predicted_sector_mass(params, p0, p1)?;
        let mut counts = Vec::new();
        for t in sweep {
            let c = sector_count(t, p0, p1, alpha)?;
            sectors.push(SectorRow {
                h: t.h,
                phi0: p0,
                phi1: p1,
                count: c.count,
                scaled: c.scaled,
                predicted,
                rel_err: rel_real(c.scaled, predicted),
            });
            counts.push(c.count);
        }
        let slope = if counts.iter().all(|&c| c > 0.0) {
            power_law_fit(&hs, &counts).map_or(f64::NAN, |f| f.slope)
        } else {
            f64::NAN
        };
        let last = sectors.last().expect("sweep not empty");
        let trivial = predicted == 0.0 && counts.iter().all(|&c| c == 0.0);
        let slope_pass = trivial || (slope + s).abs() <= opts.slope_tol;
        let rel_err = last.rel_err;
        sector_summaries.push(SectorSummary {
            phi0: p0,
            phi1: p1,
            slope,
            slope_pass,
            rel_err,
            mass_pass: trivial || rel_err <= opts.sector_tol,
        });
    }
    let pass = conjugate_pairs
        && limits.iter().all(|l| l.pass)
        && sector_summaries.iter().all(|s| s.slope_pass && s.mass_pass);
    Ok(ConvergenceReport {
        order,
        scaling_exponent: s,
        traces,
        limits,
        sectors,
        sector_summaries,
        conjugate_pairs,
        pass,
    })
}
