//! Command dispatch and artifact emission.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{fmt_f64, sha256_hex, ArtifactSink, Csv, Manifest, ManifestEntry};
use super::verify::verify_with_tables;
use super::{ExperimentConfig, ExperimentError, LoadedConfig};
use crate::classical::{
    classical_g_fit, deflection_central, fit_sojourn_asymptotics, perpendicular, scatter_ray,
    turning_point, ScatterEvent,
};
use crate::numerics::fit::power_law_fit;
use crate::partial_waves::{build_table, eikonal_g, PhaseShiftTable, ShiftSource};
use crate::potential::normalize_energy;
use crate::spectral::{
    convergence_report, dyadic_annulus_counts, predicted_constants, predicted_constants_central,
    predicted_sector_mass, sector_count, trace_power, ConvergenceOptions, ConvergenceReport,
    HomogeneousMeasureParams, SectorRow, TraceRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classical,
    Deflection,
    Phaseshifts,
    Trace,
    Measure,
    Constants,
    Sweep,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Classical,
        Command::Deflection,
        Command::Phaseshifts,
        Command::Trace,
        Command::Measure,
        Command::Constants,
        Command::Sweep,
        Command::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Classical => "classical",
            Command::Deflection => "deflection",
            Command::Phaseshifts => "phaseshifts",
            Command::Trace => "trace",
            Command::Measure => "measure",
            Command::Constants => "constants",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ExperimentError::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub summary: Value,
    /// `(name, sha256)` of every artifact, the manifest excluded.
    pub artifacts: Vec<(String, String)>,
}

/// Incoming direction `e₁` and impact direction `e₂`.
pub(crate) fn ray_family(d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut omega = vec![0.0; d];
    omega[0] = 1.0;
    let eta = if d == 2 {
        perpendicular(&omega)
    } else {
        let mut e = vec![0.0; d];
        e[1] = 1.0;
        e
    };
    (omega, eta)
}

/// The config rescaled to unit energy.
fn unit_energy(config: &ExperimentConfig) -> Result<ExperimentConfig, ExperimentError> {
    let mut c = config.clone();
    if config.potential.energy == 1.0 {
        return Ok(c);
    }
    let e = config.potential.energy;
    let (spec, _) = normalize_energy(&config.potential, 1.0)
        .map_err(|e| ExperimentError::Config(format!("potential: {e}")))?;
    c.potential = spec;
    c.h_list = config.h_list.iter().map(|h| h / e.sqrt()).collect();
    log::info!("rescaled to unit energy (E = {e}); h values divided by sqrt(E)");
    Ok(c)
}

/// Phase-shift tables for every `h` of the config, in order.
pub fn build_sweep(config: &ExperimentConfig) -> Result<Vec<PhaseShiftTable>, ExperimentError> {
    let opts = config.table_options();
    config
        .h_list
        .iter()
        .map(|&h| {
            log::info!("building phase-shift table at h = {h}");
            Ok(build_table(&config.potential, h, &opts)?)
        })
        .collect()
}

/// Constants of the limit law; central potentials use the classical `g` fit, others the eikonal profile.
pub fn predicted_params(
    config: &ExperimentConfig,
) -> Result<HomogeneousMeasureParams, ExperimentError> {
    let spec = &config.potential;
    let d = spec.dimension;
    if spec.central_coefficient().is_some() {
        let (omega, eta) = ray_family(d);
        let g = classical_g_fit(
            spec,
            &omega,
            &eta,
            &config.impact_list,
            &config.trajectory_options(),
        )?
        .g;
        Ok(predicted_constants_central(g, d, spec.alpha)?)
    } else {
        let profile = |y: &[f64], e: &[f64]| eikonal_g(spec, y, e);
        Ok(predicted_constants(
            &profile,
            d,
            spec.alpha,
            config.solver.angular_nodes,
        )?)
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn events_for(config: &ExperimentConfig) -> Result<Vec<ScatterEvent>, ExperimentError> {
    let spec = &config.potential;
    let (omega, eta_hat) = ray_family(spec.dimension);
    let opts = config.trajectory_options();
    let events = config
        .impact_list
        .par_iter()
        .map(|&b| {
            let eta: Vec<f64> = eta_hat.iter().map(|v| v * b).collect();
            scatter_ray(spec, &omega, &eta, &opts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(events)
}

fn run_classical(
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<Value, ExperimentError> {
    let spec = &config.potential;
    let events = events_for(config)?;
    let central = spec.central_coefficient().is_some();
    let mut csv = Csv::new(&[
        "b",
        "omega_out_angle",
        "eta_out",
        "tau",
        "phi",
        "sigma_quadrature",
        "energy_drift",
        "fit_residual",
    ]);
    for (b, e) in config.impact_list.iter().zip(&events) {
        let sigma = if central {
            deflection_central(spec, *b)?.sigma
        } else {
            f64::NAN
        };
        // Signed outgoing impact along the rotated normal in d = 2, its length otherwise.
        let eta_out = if e.eta_out.len() == 2 {
            let n = perpendicular(&e.omega_out);
            n[0] * e.eta_out[0] + n[1] * e.eta_out[1]
        } else {
            e.impact()
        };
        csv.row(&[
            fmt_f64(*b),
            fmt_f64(e.deflection()),
            fmt_f64(eta_out),
            fmt_f64(e.tau),
            fmt_f64(e.phi),
            fmt_f64(sigma),
            fmt_f64(e.energy_drift),
            fmt_f64(e.fit_residual),
        ]);
    }
    sink.csv("classical.csv", &csv)?;
    let fits = if config.impact_span_ok() {
        Some(fit_sojourn_asymptotics(
            &events,
            spec.alpha,
            spec.epsilon(),
        )?)
    } else {
        None
    };
    let (omega, eta) = ray_family(spec.dimension);
    let g = if events.len() >= 3 {
        Some(classical_g_fit(
            spec,
            &omega,
            &eta,
            &config.impact_list,
            &config.trajectory_options(),
        )?)
    } else {
        None
    };
    Ok(json!({
        "sojourn_fit": fits,
        "expected_exponents": [-spec.alpha, 1.0 - spec.alpha, 1.0 - spec.alpha],
        "g_fit": g,
        "max_energy_drift": events.iter().map(|e| e.energy_drift).fold(0.0, f64::max),
        "max_angular_momentum_drift": events.iter().map(|e| e.angular_momentum_drift).fold(0.0, f64::max),
    }))
}

fn fitted_exponent(x: &[f64], y: &[f64]) -> Option<f64> {
    if y.iter().all(|v| v.abs() < 1e-13) {
        return None;
    }
    power_law_fit(x, y).map(|f| f.slope)
}

fn run_deflection(
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<Value, ExperimentError> {
    let spec = &config.potential;
    if spec.central_coefficient().is_none() {
        return Err(ExperimentError::Config(
            "potential: deflection needs a central potential".into(),
        ));
    }
    let rows = config
        .impact_list
        .par_iter()
        .map(|&b| Ok((b, deflection_central(spec, b)?, turning_point(spec, b)?.0)))
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let mut csv = Csv::new(&["eta", "sigma", "r_turn", "turn_ratio", "quad_error"]);
    for (b, dfl, ratio) in &rows {
        csv.row(&[
            fmt_f64(*b),
            fmt_f64(dfl.sigma),
            fmt_f64(dfl.r_turn),
            fmt_f64(*ratio),
            fmt_f64(dfl.quad_error),
        ]);
    }
    sink.csv("deflection.csv", &csv)?;
    let b: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let s: Vec<f64> = rows.iter().map(|r| r.1.sigma).collect();
    let t: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(json!({
        "sigma_exponent": fitted_exponent(&b, &s),
        "turn_ratio_exponent": fitted_exponent(&b, &t),
        "expected_exponent": -spec.alpha,
        "max_quad_error": rows.iter().map(|r| r.1.quad_error).fold(0.0, f64::max),
    }))
}

fn table_summary(t: &PhaseShiftTable, rows_written: u64) -> Value {
    json!({
        "h": t.h,
        "entries": t.len(),
        "exact_entries": t.exact.len(),
        "l_star": t.l_star,
        "crossover_error": t.crossover_error,
        "l_max": t.l_max,
        "tail_bound": t.tail_bound,
        "tail_sum": t.tail_sum,
        "max_method_gap": t.max_method_gap,
        "delta_floor": t.delta_floor,
        "rows_written": rows_written,
    })
}

fn run_phaseshifts(
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<Value, ExperimentError> {
    let tables = build_sweep(config)?;
    let mut out = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let mut csv = Csv::new(&["l", "nu", "b", "delta", "method", "mult"]);
        let mut rows = 0u64;
        let mut eik = 0u64;
        for e in t.iter() {
            if e.method == ShiftSource::Eikonal {
                if eik == config.solver.csv_eikonal_rows {
                    break;
                }
                eik += 1;
            }
            csv.row(&[
                e.l.to_string(),
                fmt_f64(e.nu),
                fmt_f64(e.b),
                fmt_f64(e.delta),
                e.method.as_str().into(),
                e.mult.to_string(),
            ]);
            rows += 1;
        }
        let name = if tables.len() == 1 {
            "phaseshifts.csv".to_string()
        } else {
            format!("phaseshifts_{i}.csv")
        };
        sink.csv(&name, &csv)?;
        let mut s = table_summary(t, rows);
        s["file"] = json!(name);
        out.push(s);
    }
    Ok(json!({ "tables": out }))
}

fn trace_rows(
    tables: &[PhaseShiftTable],
    params: &HomogeneousMeasureParams,
    k_max: u32,
) -> Result<Vec<TraceRow>, ExperimentError> {
    let s = params.alpha * params.gamma;
    let mut rows = Vec::new();
    for t in tables {
        let w = t.h.powf(s);
        for k in 1..=k_max as i64 {
            for kk in [k, -k] {
                let tr = trace_power(t, kk)?;
                let pred = params.predicted_trace(kk);
                let scaled = tr * w;
                let den = pred.norm();
                let rel_err = if den == 0.0 {
                    scaled.norm()
                } else {
                    (scaled - pred).norm() / den
                };
                rows.push(TraceRow {
                    h: t.h,
                    k: kk,
                    trace: tr,
                    scaled,
                    predicted: pred,
                    rel_err,
                });
            }
        }
    }
    Ok(rows)
}

fn traces_csv(rows: &[TraceRow]) -> Csv {
    let mut csv = Csv::new(&[
        "h",
        "k",
        "re",
        "im",
        "scaled_re",
        "scaled_im",
        "predicted_re",
        "predicted_im",
        "rel_err",
    ]);
    for r in rows {
        csv.row(&[
            fmt_f64(r.h),
            r.k.to_string(),
            fmt_f64(r.trace.re),
            fmt_f64(r.trace.im),
            fmt_f64(r.scaled.re),
            fmt_f64(r.scaled.im),
            fmt_f64(r.predicted.re),
            fmt_f64(r.predicted.im),
            fmt_f64(r.rel_err),
        ]);
    }
    csv
}

fn sector_rows(
    config: &ExperimentConfig,
    tables: &[PhaseShiftTable],
    params: &HomogeneousMeasureParams,
) -> Result<Vec<SectorRow>, ExperimentError> {
    let mut rows = Vec::new();
    for s in &config.sectors {
        let predicted = predicted_sector_mass(params, s[0], s[1])?;
        for t in tables {
            let c = sector_count(t, s[0], s[1], params.alpha)?;
            let den = predicted.abs();
            let rel_err = if den == 0.0 {
                c.scaled.abs()
            } else {
                (c.scaled - predicted).abs() / den
            };
            rows.push(SectorRow {
                h: t.h,
                phi0: s[0],
                phi1: s[1],
                count: c.count,
                scaled: c.scaled,
                predicted,
                rel_err,
            });
        }
    }
    Ok(rows)
}

fn sectors_csv(rows: &[SectorRow]) -> Csv {
    let mut csv = Csv::new(&["h", "phi0", "phi1", "N", "scaled", "predicted", "rel_err"]);
    for r in rows {
        csv.row(&[
            fmt_f64(r.h),
            fmt_f64(r.phi0),
            fmt_f64(r.phi1),
            fmt_f64(r.count),
            fmt_f64(r.scaled),
            fmt_f64(r.predicted),
            fmt_f64(r.rel_err),
        ]);
    }
    csv
}

fn annuli_csv(
    config: &ExperimentConfig,
    tables: &[PhaseShiftTable],
) -> Result<Csv, ExperimentError> {
    let mut csv = Csv::new(&["h", "p", "count", "C_p"]);
    for t in tables {
        for a in dyadic_annulus_counts(t, config.potential.alpha, config.solver.p_max)? {
            csv.row(&[
                fmt_f64(t.h),
                a.p.to_string(),
                fmt_f64(a.count),
                fmt_f64(a.c_p),
            ]);
        }
    }
    Ok(csv)
}

fn convergence(
    config: &ExperimentConfig,
    tables: &[PhaseShiftTable],
    params: &HomogeneousMeasureParams,
) -> Result<ConvergenceReport, ExperimentError> {
    let tol = &config.tolerances;
    let opts = ConvergenceOptions {
        k_max: config.k_max,
        sectors: config.sectors.iter().map(|s| (s[0], s[1])).collect(),
        trace_tol: tol.trace,
        sector_tol: tol.sector,
        slope_tol: tol.counting_slope,
        richardson_order: config.solver.richardson_order,
        ..Default::default()
    };
    let refs: Vec<&PhaseShiftTable> = tables.iter().collect();
    Ok(convergence_report(
        &refs,
        params,
        config.potential.epsilon(),
        &opts,
    )?)
}

fn constants_json(p: &HomogeneousMeasureParams) -> Value {
    json!({
        "d": p.d,
        "alpha": p.alpha,
        "gamma": p.gamma,
        "beta": p.beta,
        "Gamma": complex_json(p.big_gamma),
        "a1": p.a1,
        "a2": p.a2,
        "c": complex_json(p.c),
        "c_direct": complex_json(p.c_direct),
        "prefactor": p.prefactor,
        "c1": p.c1,
        "c2": p.c2,
    })
}

fn run_spectral(
    cmd: Command,
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<Value, ExperimentError> {
    let params = predicted_params(config)?;
    let tables = build_sweep(config)?;
    let mut summary = json!({
        "constants": constants_json(&params),
        "tables": tables.iter().map(|t| table_summary(t, 0)).collect::<Vec<_>>(),
    });
    if matches!(cmd, Command::Trace | Command::Sweep) {
        sink.csv(
            "traces.csv",
            &traces_csv(&trace_rows(&tables, &params, config.k_max)?),
        )?;
    }
    if matches!(cmd, Command::Measure | Command::Sweep) {
        sink.csv(
            "sectors.csv",
            &sectors_csv(&sector_rows(config, &tables, &params)?),
        )?;
        sink.csv("annuli.csv", &annuli_csv(config, &tables)?)?;
    }
    if tables.len() >= 3 {
        let rep = convergence(config, &tables, &params)?;
        summary["convergence"] =
            serde_json::to_value(&rep).map_err(|e| ExperimentError::Io(e.to_string()))?;
    } else if cmd == Command::Sweep {
        return Err(ExperimentError::Config(
            "h_list: sweep needs at least 3 values".into(),
        ));
    }
    Ok(summary)
}

fn run_verify(
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<(Value, bool), ExperimentError> {
    config.validate_for_verify()?;
    let tables = build_sweep(config)?;
    let rep = verify_with_tables(config, &tables)?;
    sink.csv("traces.csv", &traces_csv(&rep.convergence.traces))?;
    sink.csv("sectors.csv", &sectors_csv(&rep.convergence.sectors))?;
    sink.csv("annuli.csv", &annuli_csv(config, &tables)?)?;
    let mut v = serde_json::to_value(&rep).map_err(|e| ExperimentError::Io(e.to_string()))?;
    v["tables"] = json!(tables
        .iter()
        .map(|t| table_summary(t, 0))
        .collect::<Vec<_>>());
    Ok((v, rep.pass))
}

fn dispatch(
    cmd: Command,
    config: &ExperimentConfig,
    sink: &mut ArtifactSink,
) -> Result<(Value, bool), ExperimentError> {
    Ok(match cmd {
        Command::Classical => (run_classical(config, sink)?, true),
        Command::Deflection => (run_deflection(config, sink)?, true),
        Command::Phaseshifts => (run_phaseshifts(config, sink)?, true),
        Command::Trace | Command::Measure | Command::Sweep => {
            (run_spectral(cmd, config, sink)?, true)
        }
        Command::Constants => (
            json!({ "constants": constants_json(&predicted_params(config)?) }),
            true,
        ),
        Command::Verify => run_verify(config, sink)?,
    })
}

/// Runs `cmd` on `workers` threads and writes its artifacts, `summary.json` and `manifest.json` to `out`.
///
/// `config_text` is hashed into the manifest. Errors still leave a manifest with the exit code.
pub fn run_command(
    cmd: Command,
    loaded: &LoadedConfig,
    config_text: &str,
    out: &Path,
    workers: usize,
) -> Result<RunOutcome, ExperimentError> {
    let start = Instant::now();
    let mut sink = ArtifactSink::new(out)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ExperimentError::Numerical(format!("worker pool: {e}")))?;
    let result = pool.install(|| {
        let config = unit_energy(&loaded.config)?;
        let (body, pass) = dispatch(cmd, &config, &mut sink)?;
        let summary = json!({
            "command": cmd.as_str(),
            "pass": pass,
            "tolerances": config.tolerances,
            "defaulted": loaded.defaulted,
            "result": body,
        });
        sink.json("summary.json", &summary)?;
        Ok::<_, ExperimentError>((summary, pass))
    });
    let exit_code = match &result {
        Ok((_, true)) => 0,
        Ok((_, false)) => ExperimentError::Verification.exit_code(),
        Err(e) => e.exit_code(),
    };
    let artifacts = sink.artifacts().to_vec();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.as_str().into(),
        config_sha256: sha256_hex(config_text.as_bytes()),
        workers,
        wall_time_s: start.elapsed().as_secs_f64(),
        exit_code,
        artifacts: artifacts
            .iter()
            .map(|(name, sha256)| ManifestEntry {
                name: name.clone(),
                sha256: sha256.clone(),
            })
            .collect(),
    };
    sink.json("manifest.json", &manifest)?;
    let (summary, _) = result?;
    Ok(RunOutcome {
        exit_code,
        summary,
        artifacts,
    })
}
