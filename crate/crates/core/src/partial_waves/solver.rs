//! Exact phase shifts of the radial equation
//! `-h² u'' + (h²(ν² - ¼)/r² + V(r)) u = u`.
//!
//! Both methods start at `r₀` inside the centrifugal/potential barrier, where
//! the regular solution is fixed by its WKB logarithmic derivative, and stop
//! at a matching radius `R`. The remainder `R..∞` is added in closed form.

use serde::{Deserialize, Serialize};

use super::riccati::{free_phase, riccati_bessel, RiccatiBessel};
use super::PartialWaveError;
use crate::numerics::ode::{Dop853, OdeSystem};
use crate::numerics::quadrature::integrate;
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Barrier depth `∫ κ dr` between the start radius and the turning point.
    pub barrier_depth: f64,
    /// The matching radius is chosen with `|V(R)| <= tail_potential`.
    pub tail_potential: f64,
    /// Tolerance of the variable-phase integration.
    pub ode_tol: f64,
    /// Numerov step as a fraction of the local wavelength scale `1/κ_max`.
    pub numerov_step: f64,
    /// Largest accepted gap between the two methods.
    pub method_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            barrier_depth: 25.0,
            tail_potential: 3e-5,
            ode_tol: 1e-12,
            numerov_step: 0.03,
            method_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactPhaseShift {
    /// Variable-phase value (the reported one).
    pub delta: f64,
    /// Numerov value, branch-aligned to `delta`.
    pub delta_numerov: f64,
    pub r_start: f64,
    pub r_match: f64,
    /// Closed-form contribution of `r > R`.
    pub tail: f64,
}

/// The radial problem at fixed `(ν, h)`.
pub(crate) struct Radial<'a> {
    pub spec: &'a PotentialSpec,
    pub nu: f64,
    pub h: f64,
}

impl Radial<'_> {
    fn v(&self, r: f64) -> f64 {
        self.spec.radial(r)
    }

    /// `F = (V - 1)/h² + (ν² - ¼)/r²`, so that `u'' = F u`.
    fn f(&self, r: f64) -> f64 {
        (self.v(r) - 1.0) / (self.h * self.h) + (self.nu * self.nu - 0.25) / (r * r)
    }

    fn df(&self, r: f64) -> f64 {
        self.spec.radial_derivative(r) / (self.h * self.h)
            - 2.0 * (self.nu * self.nu - 0.25) / (r * r * r)
    }

    /// Outermost radius with `F = 0`, if any.
    fn turning_point(&self) -> Option<f64> {
        let floor = 10.0 * self.spec.r_min;
        let mut r = (2.0 * self.nu * self.h).max(4.0);
        while self.f(r) > 0.0 {
            r *= 2.0;
        }
        let q = 0.98;
        loop {
            let rn = r * q;
            if rn < floor {
                return None;
            }
            if self.f(rn) > 0.0 {
                return crate::numerics::roots::brent(|x| self.f(x), rn, r, 1e-14 * r, 200);
            }
            r = rn;
        }
    }

    /// Start radius inside the barrier and the outward logarithmic derivative there (per unit r).
    fn start(&self, depth: f64) -> (f64, f64) {
        let floor = 10.0 * self.spec.r_min;
        match self.turning_point() {
            Some(rt) => {
                let kappa = |r: f64| self.f(r).max(0.0).sqrt();
                let mut acc = 0.0;
                let mut r = rt;
                loop {
                    let step = 0.01 * r;
                    let rn = (r - step).max(floor);
                    let mid = 0.5 * (r + rn);
                    acc += (r - rn) * (kappa(r) + 4.0 * kappa(mid) + kappa(rn)) / 6.0;
                    r = rn;
                    if acc >= depth || r <= floor {
                        break;
                    }
                }
                let f = self.f(r);
                let k = f.sqrt();
                (r, k - self.df(r) / (4.0 * f))
            }
            None => {
                // No barrier: regular free behaviour u ~ r^{ν+½}.
                let r = floor.max(1e-3 * self.h);
                (r, (self.nu + 0.5) / r)
            }
        }
    }

    /// Matching radius: beyond the turning region and where `V` is small.
    fn match_radius(&self, opts: &SolverOptions) -> f64 {
        let mut r = (1.5 * self.nu * self.h).max(2.0);
        while self.v(r).abs() > opts.tail_potential {
            r *= 1.05;
            if r > 1e7 {
                break;
            }
        }
        r
    }

    fn rb(&self, r: f64) -> RiccatiBessel {
        riccati_bessel(self.nu, r / self.h)
    }

    /// `tan δ` from `u` and `du/dr` against the free pair at `r`.
    fn phase_from(&self, r: f64, u: f64, du: f64) -> f64 {
        let b = self.rb(r);
        let (j, n, jp, np) = b.unscaled();
        let dx = self.h * du;
        (u * jp - dx * j).atan2(dx * n - u * np)
    }

    /// Contribution of `(R, ∞)` given `δ(R)`.
    fn tail(&self, big_r: f64, delta_r: f64) -> Result<f64, PartialWaveError> {
        let h = self.h;
        let m2 = |r: f64| {
            let (j, n, _, _) = self.rb(r).unscaled();
            j * j + n * n
        };
        let smooth = integrate(
            |t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                let r = big_r / t;
                self.v(r) * m2(r) * big_r / (t * t)
            },
            0.0,
            1.0,
            1e-16,
            1e-11,
            400,
        );
        if !smooth.converged {
            return Err(PartialWaveError::Quadrature(smooth.error));
        }
        let smooth = smooth.value / (2.0 * h);
        let (j, n, jp, np) = self.rb(big_r).unscaled();
        let m2r = j * j + n * n;
        let dm2 = 2.0 * (j * jp + n * np) / h;
        let (s, c) = delta_r.sin_cos();
        let p = j * c + n * s;
        let q = n * c - j * s;
        // Θ = θ₀ + δ with M sin Θ = p, M cos Θ = q.
        let sin2 = 2.0 * p * q / m2r;
        let cos2 = (q * q - p * p) / m2r;
        let v = self.v(big_r);
        let dv = self.spec.radial_derivative(big_r);
        let ft = v * m2r / (2.0 * h);
        let ddelta = -(v / h) * p * p;
        let omega = 2.0 / (h * m2r) + 2.0 * ddelta;
        let g = (dv * m2r * m2r + 2.0 * v * m2r * dm2) / 4.0;
        Ok(-smooth - ft * sin2 / omega - g * cos2 / omega)
    }
}

struct VariablePhase<'a> {
    radial: &'a Radial<'a>,
}

impl OdeSystem for VariablePhase<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn rhs(&self, r: f64, y: &[f64], dy: &mut [f64]) {
        let b = self.radial.rb(r);
        let (s, c) = y[0].sin_cos();
        let (j, n, _, _) = b.unscaled();
        let p = j * c + n * s;
        dy[0] = -(self.radial.v(r) / self.radial.h) * p * p;
    }
}

/// Initial `δ(r₀)` on the branch continuous from `δ(0) = 0`.
fn initial_delta(radial: &Radial, r0: f64, dlog: f64) -> f64 {
    let x0 = r0 / radial.h;
    let b = radial.rb(r0);
    let z = radial.h * dlog;
    // tan δ = (ĵ' - z ĵ) / (z n̂ - n̂'), with the scale folded in.
    let num = b.jp - z * b.j;
    let den = z * b.n - b.np;
    let t = num / den * (-2.0 * b.scale).exp();
    let theta0 = free_phase(radial.nu, x0, &b);
    // Θ₀ = θ₀ + δ₀ lies in (0, π).
    let cand = theta0 + t.atan();
    let m = (-cand / std::f64::consts::PI).ceil();
    let mut big_theta = cand + m * std::f64::consts::PI;
    if big_theta <= 0.0 {
        big_theta += std::f64::consts::PI;
    }
    big_theta - theta0
}

fn variable_phase(
    radial: &Radial,
    r0: f64,
    dlog: f64,
    big_r: f64,
    opts: &SolverOptions,
) -> Result<f64, PartialWaveError> {
    let sys = VariablePhase { radial };
    let d0 = initial_delta(radial, r0, dlog);
    let solver = Dop853::new(opts.ode_tol, vec![opts.ode_tol])
        .with_max_steps(5_000_000)
        .with_h_max(0.5 * radial.h);
    let st = solver
        .integrate(&sys, r0, &[d0], big_r)
        .map_err(PartialWaveError::Ode)?;
    if !st.y[0].is_finite() {
        return Err(PartialWaveError::NonFinite);
    }
    Ok(st.y[0])
}

/// Numerov integration returning `(u, du/dr)` at `R` (arbitrary normalization).
fn numerov_run(radial: &Radial, r0: f64, dlog: f64, big_r: f64, n: usize) -> (f64, f64) {
    let dr = (big_r - r0) / n as f64;
    let c = dr * dr / 12.0;
    let w = |r: f64| 1.0 - c * radial.f(r);
    let mut u_prev = 1.0;
    let mut u = (dlog * dr).exp();
    if !u.is_finite() {
        u = 1e300;
        u_prev = 0.0;
    }
    let mut w_prev = w(r0);
    let mut w_cur = w(r0 + dr);
    for i in 1..=n {
        let r_next = r0 + (i + 1) as f64 * dr;
        let w_next = w(r_next);
        let u_next = ((12.0 - 10.0 * w_cur) * u - w_prev * u_prev) / w_next;
        u_prev = u;
        u = u_next;
        w_prev = w_cur;
        w_cur = w_next;
        if u.abs() > 1e200 {
            u *= 1e-200;
            u_prev *= 1e-200;
        }
    }
    // Now u = u_{n+1}, u_prev = u_n at r = R.
    // Recover u_{n-1} by running the recurrence backwards one step.
    let w_n = w_prev;
    let w_np1 = w_cur;
    let w_nm1 = w(big_r - dr);
    let u_nm1 = ((12.0 - 10.0 * w_n) * u_prev - w_np1 * u) / w_nm1;
    // Fourth-order derivative: [(1 - Δ²F₊/6) u₊ - (1 - Δ²F₋/6) u₋] / (2Δ)
    let f_p = radial.f(big_r + dr);
    let f_m = radial.f(big_r - dr);
    let du = ((1.0 - dr * dr * f_p / 6.0) * u - (1.0 - dr * dr * f_m / 6.0) * u_nm1) / (2.0 * dr);
    (u_prev, du)
}

fn numerov_phase(radial: &Radial, r0: f64, dlog: f64, big_r: f64, opts: &SolverOptions) -> f64 {
    // Largest local wavenumber on the grid.
    let kmax = radial
        .f(r0)
        .abs()
        .sqrt()
        .max(1.0 / radial.h)
        .max(radial.f(big_r).abs().sqrt());
    let n = (((big_r - r0) * kmax) / opts.numerov_step).ceil() as usize;
    let n = n.max(16);
    let (u1, d1) = numerov_run(radial, r0, dlog, big_r, n);
    let (u2, d2) = numerov_run(radial, r0, dlog, big_r, 2 * n);
    let p1 = radial.phase_from(big_r, u1, d1);
    let p2 = radial.phase_from(big_r, u2, d2);
    // Both are defined mod π; bring p1 next to p2 before extrapolating.
    let p1 = p2 + wrap_pi(p1 - p2);
    (16.0 * p2 - p1) / 15.0
}

/// Reduces to `(-π/2, π/2]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    x - pi * (x / pi).round()
}

/// Exact phase shift at order `ν` (both methods).
pub fn phase_shift_nu(
    spec: &PotentialSpec,
    nu: f64,
    h: f64,
    opts: &SolverOptions,
) -> Result<ExactPhaseShift, PartialWaveError> {
    if spec.central_coefficient().is_none() {
        return Err(PartialWaveError::NotCentral);
    }
    if !(h > 0.0) || !(nu >= 0.0) {
        return Err(PartialWaveError::Invalid("need h > 0 and nu >= 0".into()));
    }
    if spec.is_zero() {
        return Ok(ExactPhaseShift {
            delta: 0.0,
            delta_numerov: 0.0,
            r_start: 0.0,
            r_match: 0.0,
            tail: 0.0,
        });
    }
    let radial = Radial { spec, nu, h };
    let (r0, dlog) = radial.start(opts.barrier_depth);
    let big_r = radial.match_radius(opts).max(r0 * 1.5);
    let da = variable_phase(&radial, r0, dlog, big_r, opts)?;
    let db = numerov_phase(&radial, r0, dlog, big_r, opts);
    let db = da + wrap_pi(db - da);
    let tail_a = radial.tail(big_r, da)?;
    let tail_b = radial.tail(big_r, db)?;
    let a = da + tail_a;
    let b = db + tail_b;
    if !(a - b).abs().le(&opts.method_tol) {
        return Err(PartialWaveError::MethodDisagreement { nu, h, a, b });
    }
    Ok(ExactPhaseShift {
        delta: a,
        delta_numerov: b,
        r_start: r0,
        r_match: big_r,
        tail: tail_a,
    })
}
