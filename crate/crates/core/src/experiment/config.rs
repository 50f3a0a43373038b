//! TOML experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::classical::TrajectoryOptions;
use crate::partial_waves::{SolverOptions, TableOptions};
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Trajectory integrator tolerance.
    pub integrator: f64,
    /// Variable-phase integrator tolerance.
    pub phase_ode: f64,
    /// Allowed deviation of fitted exponents.
    pub fit_slack: f64,
    /// Relative tolerance of extrapolated trace limits.
    pub trace: f64,
    /// Relative tolerance of scaled sector counts.
    pub sector: f64,
    /// Allowed deviation of the counting exponent.
    pub counting_slope: f64,
    /// Pairwise relative agreement of the three `g` values.
    pub g_agreement: f64,
    /// Largest variable-phase/Numerov gap.
    pub method_gap: f64,
    /// Largest energy and angular-momentum drift.
    pub drift: f64,
    /// Quadrature vs closed form of `Γ`.
    pub gamma_constant: f64,
    /// Quadrature vs closed form of the Fourier identity.
    pub fourier: f64,
    /// Spread factor allowed for the dyadic constants.
    pub dyadic_factor: f64,
    /// Allowed `|slope|` of the weighted-bound sup against `log h`.
    pub weighted_slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            integrator: 1e-10,
            phase_ode: 1e-12,
            fit_slack: 0.1,
            trace: 0.10,
            sector: 0.15,
            counting_slope: 0.1,
            g_agreement: 0.02,
            method_gap: 1e-6,
            drift: 1e-8,
            gamma_constant: 1e-8,
            fourier: 1e-6,
            dyadic_factor: 2.0,
            weighted_slope: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Launch radius of trajectories.
    pub r0: f64,
    /// Hard cap on exact phase shifts.
    pub l_cap: u64,
    pub delta_floor: f64,
    /// Smallest impact parameter where eikonal values may be used.
    pub b_min: f64,
    /// Relative exact/eikonal gap that triggers the crossover.
    pub crossover_rel: f64,
    /// Consecutive `ℓ` that must satisfy it.
    pub crossover_run: usize,
    /// Richardson error exponent; derived from the potential when absent.
    pub richardson_order: Option<f64>,
    /// Largest dyadic index.
    pub p_max: u32,
    /// Angular nodes per dimension for non-central constants.
    pub angular_nodes: usize,
    /// Eikonal rows written to `phaseshifts.csv`.
    pub csv_eikonal_rows: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let t = TableOptions::default();
        SolverConfig {
            r0: 1e3,
            l_cap: t.exact_cap,
            delta_floor: t.delta_floor,
            b_min: t.b_min,
            crossover_rel: t.crossover_rel,
            crossover_run: t.crossover_run,
            richardson_order: None,
            p_max: 20,
            angular_nodes: 16,
            csv_eikonal_rows: 10_000,
        }
    }
}

fn default_h_list() -> Vec<f64> {
    vec![0.1, 0.05, 0.025, 0.0125]
}

fn default_k_max() -> u32 {
    4
}

fn default_sectors() -> Vec<[f64; 2]> {
    let pi = std::f64::consts::PI;
    vec![
        [0.5 * pi, 1.5 * pi],
        [0.25 * pi, 0.75 * pi],
        [1.25 * pi, 1.75 * pi],
    ]
}

fn default_impacts() -> Vec<f64> {
    (0..9).map(|k| 10.0 * 10f64.powf(0.25 * k as f64)).collect()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub potential: PotentialSpec,
    #[serde(default = "default_h_list")]
    pub h_list: Vec<f64>,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_sectors")]
    pub sectors: Vec<[f64; 2]>,
    #[serde(default = "default_impacts")]
    pub impact_list: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

/// A parsed configuration and the key paths that were filled from defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub defaulted: Vec<String>,
}

fn collect_defaults(
    filled: &toml::Value,
    raw: Option<&toml::Value>,
    path: &str,
    out: &mut Vec<String>,
) {
    if let toml::Value::Table(t) = filled {
        for (k, v) in t {
            let p = if path.is_empty() {
                k.clone()
            } else {
                format!("{path}.{k}")
            };
            match raw.and_then(|r| r.get(k)) {
                None => out.push(p),
                Some(r) => collect_defaults(v, Some(r), &p, out),
            }
        }
    }
}

pub fn parse_config(text: &str) -> Result<LoadedConfig, ExperimentError> {
    let raw: toml::Value =
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.message().to_string()))?;
    let config: ExperimentConfig =
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
    config.validate()?;
    let filled =
        toml::Value::try_from(&config).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let mut defaulted = Vec::new();
    collect_defaults(&filled, Some(&raw), "", &mut defaulted);
    Ok(LoadedConfig { config, defaulted })
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |k: &str, m: String| Err(ExperimentError::Config(format!("{k}: {m}")));
        self.potential
            .validate()
            .map_err(|e| ExperimentError::Config(format!("potential: {e}")))?;
        if self.h_list.is_empty() {
            return bad("h_list", "must not be empty".into());
        }
        for (i, h) in self.h_list.iter().enumerate() {
            if !(*h > 0.0) {
                return bad(&format!("h_list[{i}]"), format!("{h} is not positive"));
            }
            if i > 0 && !(*h < self.h_list[i - 1]) {
                return bad(
                    &format!("h_list[{i}]"),
                    "values must be strictly decreasing".into(),
                );
            }
        }
        if self.k_max == 0 {
            return bad("k_max", "must be at least 1".into());
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        for (i, s) in self.sectors.iter().enumerate() {
            if !(0.0 < s[0] && s[0] < s[1] && s[1] < two_pi) {
                return bad(
                    &format!("sectors[{i}]"),
                    "need 0 < phi0 < phi1 < 2 pi (the sector must exclude angle 0)".into(),
                );
            }
        }
        for (i, b) in self.impact_list.iter().enumerate() {
            if !(*b > 0.0) {
                return bad(&format!("impact_list[{i}]"), format!("{b} is not positive"));
            }
        }
        if self.workers == Some(0) {
            return bad("workers", "must be at least 1".into());
        }
        if !(self.solver.r0 > 0.0) {
            return bad("solver.r0", "must be positive".into());
        }
        if !(self.solver.delta_floor > 0.0) {
            return bad("solver.delta_floor", "must be positive".into());
        }
        Ok(())
    }

    /// Extra rules for `verify`: the limit law needs `α > d`.
    pub fn validate_for_verify(&self) -> Result<(), ExperimentError> {
        let d = self.potential.dimension as f64;
        if !(self.potential.alpha > d) {
            return Err(ExperimentError::Config(format!(
                "potential.alpha: verify needs alpha > dimension (alpha = {}, d = {})",
                self.potential.alpha, self.potential.dimension
            )));
        }
        if self.h_list.len() < 3 {
            return Err(ExperimentError::Config(
                "h_list: verify needs at least 3 values".into(),
            ));
        }
        if !self.impact_span_ok() {
            return Err(ExperimentError::Config(
                "impact_list: verify needs at least 5 increasing values spanning two decades"
                    .into(),
            ));
        }
        Ok(())
    }

    /// At least 5 increasing impacts over two decades, as the asymptotic fits require.
    pub fn impact_span_ok(&self) -> bool {
        let b = &self.impact_list;
        b.len() >= 5 && b.windows(2).all(|w| w[1] > w[0]) && b[b.len() - 1] >= 100.0 * b[0]
    }

    pub fn trajectory_options(&self) -> TrajectoryOptions {
        TrajectoryOptions {
            tol: self.tolerances.integrator,
            r0: self.solver.r0,
            ..Default::default()
        }
    }

    pub fn table_options(&self) -> TableOptions {
        TableOptions {
            b_min: self.solver.b_min,
            crossover_rel: self.solver.crossover_rel,
            crossover_run: self.solver.crossover_run,
            delta_floor: self.solver.delta_floor,
            exact_cap: self.solver.l_cap,
            solver: SolverOptions {
                ode_tol: self.tolerances.phase_ode,
                method_tol: self.tolerances.method_gap,
                ..Default::default()
            },
            ..Default::default()
        }
    }
}
