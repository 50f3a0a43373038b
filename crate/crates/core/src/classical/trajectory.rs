//! Hamiltonian trajectories `ẋ = 2ξ`, `ξ̇ = -∇V` and their asymptotic data.
//!
//! The free flow is `x(t) = 2ω t + η`; incoming data `(ω', η')` fix the
//! asymptote `x(t) = 2ω' t + η' + o(1)` as `t -> -∞` and the outgoing data are
//! read off as `x(t) = 2ω (t - τ) + η + o(1)` as `t -> +∞`.

use serde::{Deserialize, Serialize};

use super::ClassicalError;
use crate::numerics::ode::{Dop853, OdeState, OdeSystem, StepStats};
use crate::numerics::quadrature::{integrate, QuadValue};
use crate::numerics::roots::brent;
use crate::potential::PotentialSpec;

/// Integrator and launch options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectoryOptions {
    /// Local relative tolerance of the integrator.
    pub tol: f64,
    /// Launch and exit radius.
    pub r0: f64,
    /// The launch radius is at least this multiple of `|η'|`.
    pub launch_factor: f64,
    /// Abort when the arc length exceeds this multiple of the launch radius.
    pub max_length_factor: f64,
    /// Outgoing samples with `|x| >= tail_fraction * R` enter the asymptotic fit.
    pub tail_fraction: f64,
    /// Largest accepted spread between per-sample asymptote estimates.
    pub fit_tol: f64,
    pub max_steps: usize,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions {
            tol: 1e-10,
            r0: 1e3,
            launch_factor: 10.0,
            max_length_factor: 100.0,
            tail_fraction: 0.5,
            fit_tol: 1e-7,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub spec: PotentialSpec,
    pub omega_in: Vec<f64>,
    pub eta_in: Vec<f64>,
    pub samples: Vec<TrajectorySample>,
    /// `∫ x·∇V dt` and `∫ V dt` over the integrated stretch.
    pub phi_body: f64,
    pub v_body: f64,
    /// The same integrals over the incoming free asymptote before launch.
    pub phi_in_tail: f64,
    pub v_in_tail: f64,
    /// Smallest `|x|`, located where `x·ξ = 0`.
    pub perihelion: f64,
    pub exit_radius: f64,
    pub stats: StepStats,
    pub tail_fraction: f64,
    pub fit_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterEvent {
    pub omega_in: Vec<f64>,
    pub eta_in: Vec<f64>,
    pub omega_out: Vec<f64>,
    pub eta_out: Vec<f64>,
    pub tau: f64,
    pub phi: f64,
    /// `∫ V dt` over the whole trajectory.
    pub v_integral: f64,
    pub fit_residual: f64,
    pub energy_drift: f64,
    pub angular_momentum_drift: f64,
    pub perihelion: f64,
}

impl ScatterEvent {
    /// Signed angle from `ω'` to `ω` (dimension 2), or the unsigned angle otherwise.
    pub fn deflection(&self) -> f64 {
        if self.omega_in.len() == 2 {
            let c = dot(&self.omega_in, &self.omega_out);
            let s = self.omega_in[0] * self.omega_out[1] - self.omega_in[1] * self.omega_out[0];
            // Positive when ω turns away from the side η' points to.
            let side = self.omega_in[0] * self.eta_in[1] - self.omega_in[1] * self.eta_in[0];
            let sign = if side < 0.0 { -1.0 } else { 1.0 };
            sign * s.atan2(c)
        } else {
            let c = dot(&self.omega_in, &self.omega_out);
            let w2 =
                dot(&self.omega_in, &self.omega_in) * dot(&self.omega_out, &self.omega_out) - c * c;
            w2.max(0.0).sqrt().atan2(c)
        }
    }

    pub fn impact(&self) -> f64 {
        norm(&self.eta_in)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Flow<'a> {
    spec: &'a PotentialSpec,
    d: usize,
    bad: std::cell::Cell<bool>,
}

impl OdeSystem for Flow<'_> {
    fn dim(&self) -> usize {
        2 * self.d + 2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let d = self.d;
        let x = &y[..d];
        match (self.spec.gradient(x), self.spec.evaluate(x)) {
            (Ok(g), Ok(v)) => {
                for i in 0..d {
                    dy[i] = 2.0 * y[d + i];
                    dy[d + i] = -g[i];
                }
                dy[2 * d] = dot(x, &g);
                dy[2 * d + 1] = v;
            }
            _ => {
                self.bad.set(true);
                dy.iter_mut().for_each(|v| *v = f64::NAN);
            }
        }
    }
}

/// Small fixed-size vector so that line integrals of several quantities
/// share one adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Pack(pub [f64; 16]);

impl std::ops::Add for Pack {
    type Output = Pack;
    fn add(mut self, o: Pack) -> Pack {
        for i in 0..16 {
            self.0[i] += o.0[i];
        }
        self
    }
}

impl std::ops::Sub for Pack {
    type Output = Pack;
    fn sub(mut self, o: Pack) -> Pack {
        for i in 0..16 {
            self.0[i] -= o.0[i];
        }
        self
    }
}

impl std::ops::Mul<f64> for Pack {
    type Output = Pack;
    fn mul(mut self, s: f64) -> Pack {
        for v in &mut self.0 {
            *v *= s;
        }
        self
    }
}

impl QuadValue for Pack {
    fn zero() -> Self {
        Pack([0.0; 16])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Integrals along the free ray `X(u) = p + 2 v u`, `u >= 0`:
/// `∫∇V`, `∫u ∇V`, `∫X·∇V`, `∫V` (each `du`).
pub(crate) struct RayIntegrals {
    pub grad: Vec<f64>,
    pub moment: Vec<f64>,
    pub phi: f64,
    pub v: f64,
}

pub(crate) fn ray_integrals(
    spec: &PotentialSpec,
    p: &[f64],
    v: &[f64],
) -> Result<RayIntegrals, ClassicalError> {
    let d = p.len();
    let scale = 0.5 * norm(p).max(1.0);
    let mut failed = false;
    let res = integrate(
        |t: f64| {
            if t >= 1.0 {
                return Pack::zero();
            }
            let w = 1.0 - t;
            let u = scale * t / w;
            let jac = scale / (w * w);
            let x: Vec<f64> = (0..d).map(|i| p[i] + 2.0 * v[i] * u).collect();
            let (g, val) = match (spec.gradient(&x), spec.evaluate(&x)) {
                (Ok(g), Ok(val)) => (g, val),
                _ => {
                    failed = true;
                    return Pack::zero();
                }
            };
            let mut out = [0.0; 16];
            for i in 0..d {
                out[i] = g[i] * jac;
                out[d + i] = u * g[i] * jac;
            }
            out[2 * d] = dot(&x, &g) * jac;
            out[2 * d + 1] = val * jac;
            Pack(out)
        },
        0.0,
        1.0,
        1e-17,
        1e-12,
        2000,
    );
    if failed {
        return Err(ClassicalError::InnerRegion);
    }
    if !res.converged && res.error > 1e-12 * res.value.magnitude().max(1e-14) {
        return Err(ClassicalError::UnconvergedTail(res.error));
    }
    let r = res.value.0;
    Ok(RayIntegrals {
        grad: r[..d].to_vec(),
        moment: r[d..2 * d].to_vec(),
        phi: r[2 * d],
        v: r[2 * d + 1],
    })
}

fn sample(spec: &PotentialSpec, t: f64, y: &[f64], d: usize) -> TrajectorySample {
    let x = y[..d].to_vec();
    let xi = y[d..2 * d].to_vec();
    let energy = dot(&xi, &xi) + spec.evaluate(&x).unwrap_or(f64::NAN);
    TrajectorySample { t, x, xi, energy }
}

/// Integrates the ray with incoming data `(ω', η')` from the launch radius
/// until it leaves that radius again.
pub fn integrate_trajectory(
    spec: &PotentialSpec,
    omega_in: &[f64],
    eta_in: &[f64],
    opts: &TrajectoryOptions,
) -> Result<Trajectory, ClassicalError> {
    let d = spec.dimension;
    if omega_in.len() != d || eta_in.len() != d {
        return Err(ClassicalError::Invalid(
            "direction and impact vector must have the spec's dimension".into(),
        ));
    }
    if d > 7 {
        return Err(ClassicalError::Invalid(
            "trajectories support dimension <= 7".into(),
        ));
    }
    if (norm(omega_in) - 1.0).abs() > 1e-12 {
        return Err(ClassicalError::Invalid(
            "incoming direction must be a unit vector".into(),
        ));
    }
    let b = norm(eta_in);
    if dot(omega_in, eta_in).abs() > 1e-10 * b.max(1.0) {
        return Err(ClassicalError::Invalid(
            "impact vector must be orthogonal to the direction".into(),
        ));
    }
    if (spec.energy - 1.0).abs() > 1e-15 {
        return Err(ClassicalError::Invalid(
            "normalize the potential to unit energy first".into(),
        ));
    }
    let rl = opts.r0.max(opts.launch_factor * b);
    let t0 = -0.5 * (rl * rl - b * b).sqrt();
    let p0: Vec<f64> = (0..d).map(|i| 2.0 * omega_in[i] * t0 + eta_in[i]).collect();
    // First-order correction from the stretch (-inf, t0] of the incoming asymptote.
    let back: Vec<f64> = omega_in.iter().map(|v| -v).collect();
    let tail = ray_integrals(spec, &p0, &back)?;
    let mut y0 = vec![0.0; 2 * d + 2];
    for i in 0..d {
        y0[i] = p0[i] - 2.0 * tail.moment[i];
        y0[d + i] = omega_in[i] - tail.grad[i];
    }
    let v_start = spec.evaluate(&y0[..d])?;
    let xi2: f64 = dot(&y0[d..2 * d], &y0[d..2 * d]);
    if 1.0 - v_start <= 0.0 || xi2 == 0.0 {
        return Err(ClassicalError::Invalid(
            "launch point is classically forbidden".into(),
        ));
    }
    let s = ((1.0 - v_start) / xi2).sqrt();
    for i in d..2 * d {
        y0[i] *= s;
    }

    let flow = Flow {
        spec,
        d,
        bad: std::cell::Cell::new(false),
    };
    let mut atol = vec![opts.tol * 1e-3; 2 * d];
    atol.push(opts.tol * 1e-8);
    atol.push(opts.tol * 1e-8);
    let solver = Dop853::new(opts.tol, atol)
        .with_max_steps(opts.max_steps)
        .with_h_max(0.25 * rl);
    let mut st: OdeState = solver.start(&flow, t0, &y0, 0.0);
    let mut samples = vec![sample(spec, t0, &y0, d)];
    let max_t = t0 + 0.5 * opts.max_length_factor * rl;
    let mut perihelion = f64::INFINITY;
    let inner = 10.0 * spec.r_min;

    loop {
        let prev = st.clone();
        let h = solver
            .advance(&flow, &mut st, max_t)
            .map_err(ClassicalError::Ode)?;
        if flow.bad.get() || norm(&st.y[..d]) < inner {
            return Err(ClassicalError::InnerRegion);
        }
        let rdot_prev = dot(&prev.y[..d], &prev.y[d..2 * d]);
        let rdot = dot(&st.y[..d], &st.y[d..2 * d]);
        if rdot_prev < 0.0 && rdot >= 0.0 {
            // Locate the perihelion inside the step.
            let f = |hh: f64| {
                let y = solver.trial_step(&flow, prev.t, &prev.y, &prev.dy, hh).y;
                dot(&y[..d], &y[d..2 * d])
            };
            let hp = brent(f, 0.0, h, 1e-15 * h.max(1.0), 200).unwrap_or(h);
            let y = if hp > 0.0 {
                solver.trial_step(&flow, prev.t, &prev.y, &prev.dy, hp).y
            } else {
                prev.y.clone()
            };
            perihelion = perihelion.min(norm(&y[..d]));
        }
        let r = norm(&st.y[..d]);
        if rdot > 0.0 && r >= rl {
            // Cut the last step at the exit radius.
            let f = |hh: f64| {
                let y = solver.trial_step(&flow, prev.t, &prev.y, &prev.dy, hh).y;
                norm(&y[..d]) - rl
            };
            let he = if norm(&prev.y[..d]) < rl {
                brent(f, 0.0, h, 1e-13 * h.max(1.0), 200).unwrap_or(h)
            } else {
                0.0
            };
            let (te, ye) = if he > 0.0 {
                (
                    prev.t + he,
                    solver.trial_step(&flow, prev.t, &prev.y, &prev.dy, he).y,
                )
            } else {
                (prev.t, prev.y.clone())
            };
            samples.push(sample(spec, te, &ye, d));
            st.t = te;
            st.y = ye;
            break;
        }
        samples.push(sample(spec, st.t, &st.y, d));
        if st.t >= max_t {
            return Err(ClassicalError::Trapping {
                length: 2.0 * (st.t - t0),
            });
        }
    }
    if !perihelion.is_finite() {
        perihelion = samples
            .iter()
            .map(|s| norm(&s.x))
            .fold(f64::INFINITY, f64::min);
    }
    Ok(Trajectory {
        spec: spec.clone(),
        omega_in: omega_in.to_vec(),
        eta_in: eta_in.to_vec(),
        samples,
        phi_body: st.y[2 * d],
        v_body: st.y[2 * d + 1],
        phi_in_tail: tail.phi,
        v_in_tail: tail.v,
        perihelion,
        exit_radius: rl,
        stats: st.stats.clone(),
        tail_fraction: opts.tail_fraction,
        fit_tol: opts.fit_tol,
    })
}

impl Trajectory {
    pub fn energy_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.energy - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest relative change of `|x ∧ ξ|` along the samples.
    pub fn angular_momentum_drift(&self) -> f64 {
        let l = |s: &TrajectorySample| {
            let a = dot(&s.x, &s.x) * dot(&s.xi, &s.xi) - dot(&s.x, &s.xi).powi(2);
            a.max(0.0).sqrt()
        };
        let l0 = l(&self.samples[0]);
        if l0 == 0.0 {
            return 0.0;
        }
        self.samples
            .iter()
            .map(|s| (l(s) - l0).abs() / l0)
            .fold(0.0, f64::max)
    }

    fn exit_tail(&self) -> Result<RayIntegrals, ClassicalError> {
        let last = self.samples.last().expect("trajectory has samples");
        let v = unit(&last.xi);
        ray_integrals(&self.spec, &last.x, &v)
    }
}

fn unit(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    a.iter().map(|v| v / n).collect()
}

/// `φ = ∫ x·∇V dt` over the whole line: integrated part plus both free tails.
pub fn sojourn_phi(traj: &Trajectory) -> Result<f64, ClassicalError> {
    let out = traj.exit_tail()?;
    // The outgoing ray is parametrized by distance/2 per unit time.
    Ok(traj.phi_in_tail + traj.phi_body + out.phi)
}

/// Outgoing direction, impact vector and time delay from first-order corrected
/// asymptotes of the outgoing samples.
pub fn extract_asymptotics(traj: &Trajectory) -> Result<ScatterEvent, ClassicalError> {
    let d = traj.omega_in.len();
    let rl = traj.exit_radius;
    let n = traj.samples.len();
    let mut picks: Vec<&TrajectorySample> = traj
        .samples
        .iter()
        .filter(|s| dot(&s.x, &s.xi) > 0.0 && norm(&s.x) >= traj.tail_fraction * rl)
        .collect();
    if picks.is_empty() {
        picks.push(&traj.samples[n - 1]);
    }
    let mut omegas = Vec::new();
    let mut offsets = Vec::new();
    for s in &picks {
        let v = unit(&s.xi);
        let tail = ray_integrals(&traj.spec, &s.x, &v)?;
        let xi_inf: Vec<f64> = (0..d).map(|i| s.xi[i] - tail.grad[i]).collect();
        let om = unit(&xi_inf);
        let a: Vec<f64> = (0..d)
            .map(|i| s.x[i] - 2.0 * xi_inf[i] * s.t + 2.0 * tail.moment[i])
            .collect();
        omegas.push(om);
        offsets.push(a);
    }
    let m = picks.len() as f64;
    let mean = |vs: &Vec<Vec<f64>>| -> Vec<f64> {
        (0..d)
            .map(|i| vs.iter().map(|v| v[i]).sum::<f64>() / m)
            .collect()
    };
    let omega = unit(&mean(&omegas));
    let a = mean(&offsets);
    let mut resid: f64 = 0.0;
    for (o, off) in omegas.iter().zip(&offsets) {
        for i in 0..d {
            resid = resid
                .max((o[i] - omega[i]).abs())
                .max((off[i] - a[i]).abs() / rl);
        }
    }
    let tau = -0.5 * dot(&a, &omega);
    let eta: Vec<f64> = (0..d).map(|i| a[i] + 2.0 * tau * omega[i]).collect();
    if resid > traj.fit_tol {
        return Err(ClassicalError::FitResidual(resid));
    }
    let out = traj.exit_tail()?;
    Ok(ScatterEvent {
        omega_in: traj.omega_in.clone(),
        eta_in: traj.eta_in.clone(),
        omega_out: omega,
        eta_out: eta,
        tau,
        phi: traj.phi_in_tail + traj.phi_body + out.phi,
        v_integral: traj.v_in_tail + traj.v_body + out.v,
        fit_residual: resid,
        energy_drift: traj.energy_drift(),
        angular_momentum_drift: traj.angular_momentum_drift(),
        perihelion: traj.perihelion,
    })
}

/// Convenience: integrate and extract in one call.
pub fn scatter_ray(
    spec: &PotentialSpec,
    omega_in: &[f64],
    eta_in: &[f64],
    opts: &TrajectoryOptions,
) -> Result<ScatterEvent, ClassicalError> {
    let t = integrate_trajectory(spec, omega_in, eta_in, opts)?;
    extract_asymptotics(&t)
}
