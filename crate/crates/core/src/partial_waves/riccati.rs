//! Riccati–Bessel functions `ĵ_ν(x) = √(πx/2) J_ν(x)`, `n̂_ν(x) = -√(πx/2) Y_ν(x)`.
//!
//! With this sign `ĵ ~ sin(x - νπ/2 + π/4)`, `n̂ ~ cos(x - νπ/2 + π/4)` and the
//! Wronskian `ĵ' n̂ - ĵ n̂'` equals `+1`.
//!
//! Evaluation picks, in order: the Hankel expansion for `x ≫ ν²`, the Debye
//! expansions for large `ν` away from the turning point, and Steed's method
//! with Temme's series otherwise.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::special::gamma::temme_gammas;

/// Values `(ĵ, n̂, ĵ', n̂')` with a common scale exponent `s`: the true values
/// are `ĵ e^{-s}`, `ĵ' e^{-s}`, `n̂ e^{s}`, `n̂' e^{s}`. `s = 0` unless the
/// plain values would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiBessel {
    pub j: f64,
    pub n: f64,
    pub jp: f64,
    pub np: f64,
    pub scale: f64,
}

impl RiccatiBessel {
    pub fn wronskian(&self) -> f64 {
        self.jp * self.n - self.j * self.np
    }

    /// Plain values; may under/overflow when `scale > 0`.
    pub fn unscaled(&self) -> (f64, f64, f64, f64) {
        let e = self.scale.exp();
        (self.j / e, self.n * e, self.jp / e, self.np * e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    Hankel,
    DebyeOscillatory,
    DebyeForbidden,
    Steed,
}

const FOLD_LIMIT: f64 = 600.0;
const SERIES_TOL: f64 = 1e-16;
const DEBYE_MIN_ORDER: f64 = 8.0;

struct DebyePolys {
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

const DEBYE_TERMS: usize = 13;

fn debye_polys() -> &'static DebyePolys {
    static P: OnceLock<DebyePolys> = OnceLock::new();
    P.get_or_init(|| {
        let mut u = vec![vec![1.0]];
        let mut v = vec![vec![1.0]];
        for k in 0..DEBYE_TERMS - 1 {
            let uk = &u[k];
            let n = uk.len() + 3;
            // derivative
            let mut du = vec![0.0; n];
            for (i, c) in uk.iter().enumerate().skip(1) {
                du[i - 1] = c * i as f64;
            }
            let mut next = vec![0.0; n];
            // ½ p² (1 - p²) u'
            for (i, c) in du.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                next[i + 2] += 0.5 * c;
                if i + 4 < n {
                    next[i + 4] -= 0.5 * c;
                }
            }
            // ⅛ ∫_0^p (1 - 5t²) u
            for (i, c) in uk.iter().enumerate() {
                next[i + 1] += c / (8.0 * (i + 1) as f64);
                if i + 3 < n {
                    next[i + 3] -= 5.0 * c / (8.0 * (i + 3) as f64);
                }
            }
            let mut vn = next.clone();
            // - ½ p (1 - p²) u_k - p² (1 - p²) u_k'
            for (i, c) in uk.iter().enumerate() {
                vn[i + 1] -= 0.5 * c;
                if i + 3 < n {
                    vn[i + 3] += 0.5 * c;
                }
            }
            for (i, c) in du.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                vn[i + 2] -= c;
                if i + 4 < n {
                    vn[i + 4] += c;
                }
            }
            u.push(next);
            v.push(vn);
        }
        DebyePolys { u, v }
    })
}

fn poly_c(c: &[f64], p: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * p + a)
}

fn poly_r(c: &[f64], p: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * p + a)
}

/// `Σ (±1)^k poly_k(p) / ν^k` with a convergence test.
fn asym_sum_c(polys: &[Vec<f64>], p: Complex64, nu: f64, alternate: bool) -> Option<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut nk = 1.0;
    for (k, c) in polys.iter().enumerate() {
        let mut t = poly_c(c, p) / nk;
        if alternate && k % 2 == 1 {
            t = -t;
        }
        let m = t.norm();
        if k >= 2 && m > prev {
            return None;
        }
        sum += t;
        if m <= SERIES_TOL * sum.norm() {
            return Some(sum);
        }
        prev = m;
        nk *= nu;
    }
    None
}

fn asym_sum_r(polys: &[Vec<f64>], p: f64, nu: f64, alternate: bool) -> Option<f64> {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut nk = 1.0;
    for (k, c) in polys.iter().enumerate() {
        let mut t = poly_r(c, p) / nk;
        if alternate && k % 2 == 1 {
            t = -t;
        }
        let m = t.abs();
        if k >= 2 && m > prev {
            return None;
        }
        sum += t;
        if m <= SERIES_TOL * sum.abs() {
            return Some(sum);
        }
        prev = m;
        nk *= nu;
    }
    None
}

/// Complex `s H1` and its derivative to Riccati values.
fn from_hankel(sh: Complex64, dsh: Complex64) -> RiccatiBessel {
    RiccatiBessel {
        j: sh.re,
        n: -sh.im,
        jp: dsh.re,
        np: -dsh.im,
        scale: 0.0,
    }
}

fn debye_oscillatory(nu: f64, x: f64) -> Option<RiccatiBessel> {
    let w = ((x - nu) * (x + nu)).sqrt();
    let beta = w.atan2(nu);
    let p = Complex64::new(0.0, nu / w);
    let polys = debye_polys();
    let su = asym_sum_c(&polys.u, p, nu, true)?;
    let sv = asym_sum_c(&polys.v, p, nu, true)?;
    let xi = w - nu * beta - FRAC_PI_4;
    let e = Complex64::from_polar(1.0, xi);
    let s = (PI * x / 2.0).sqrt();
    let amp = (2.0 / (PI * w)).sqrt();
    let h1 = e * su * amp;
    let sin2b = 2.0 * (w / x) * (nu / x);
    let h1p = Complex64::i() * e * sv * (sin2b / (PI * nu)).sqrt();
    let sh = h1 * s;
    let dsh = h1 * (s / (2.0 * x)) + h1p * s;
    Some(from_hankel(sh, dsh))
}

fn debye_forbidden(nu: f64, x: f64) -> Option<RiccatiBessel> {
    let r = x / nu;
    let tanh_a = ((1.0 - r) * (1.0 + r)).sqrt();
    let alpha = (1.0 / r).acosh();
    let p = 1.0 / tanh_a;
    let polys = debye_polys();
    let su_j = asym_sum_r(&polys.u, p, nu, false)?;
    let su_y = asym_sum_r(&polys.u, p, nu, true)?;
    let sv_j = asym_sum_r(&polys.v, p, nu, false)?;
    let sv_y = asym_sum_r(&polys.v, p, nu, true)?;
    let big_e = nu * (alpha - tanh_a);
    let cosh_a = 1.0 / r;
    let sinh2a = 2.0 * cosh_a * cosh_a * tanh_a;
    // Scaled by e^{±E}.
    let jt = su_j / (2.0 * PI * nu * tanh_a).sqrt();
    let yt = -su_y / (PI * nu * tanh_a / 2.0).sqrt();
    let jpt = (sinh2a / (4.0 * PI * nu)).sqrt() * sv_j;
    let ypt = (sinh2a / (PI * nu)).sqrt() * sv_y;
    let s = (PI * x / 2.0).sqrt();
    let ds = s / (2.0 * x);
    let mut out = RiccatiBessel {
        j: s * jt,
        n: -s * yt,
        jp: ds * jt + s * jpt,
        np: -(ds * yt + s * ypt),
        scale: big_e,
    };
    if big_e < FOLD_LIMIT {
        let f = big_e.exp();
        out = RiccatiBessel {
            j: out.j / f,
            n: out.n * f,
            jp: out.jp / f,
            np: out.np * f,
            scale: 0.0,
        };
    }
    Some(out)
}

fn hankel_large_x(nu: f64, x: f64) -> Option<RiccatiBessel> {
    // s H1 = e^{iω} Σ i^k a_k(ν) x^{-k}
    let mu = 4.0 * nu * nu;
    let mut c = Complex64::new(1.0, 0.0);
    let mut sum = c;
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut prev = 1.0;
    let mut converged = false;
    for k in 1..200 {
        let kf = k as f64;
        c = c * Complex64::i() * ((mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x));
        let m = c.norm();
        if m > prev && k > 1 {
            return None;
        }
        sum += c;
        dsum -= c * (kf / x);
        prev = m;
        if m <= SERIES_TOL * sum.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let omega = x - (nu * FRAC_PI_2 + FRAC_PI_4);
    let e = Complex64::from_polar(1.0, omega);
    let sh = e * sum;
    let dsh = e * (Complex64::i() * sum + dsum);
    Some(from_hankel(sh, dsh))
}

/// Steed's method (continued fractions) with Temme's series for `x < 2`.
/// Returns `(J, Y, J', Y')`.
fn steed(nu: f64, x: f64) -> (f64, f64, f64, f64) {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 1_000_000;
    const XMIN: f64 = 2.0;
    let nl = if x < XMIN {
        (nu + 0.5) as usize
    } else {
        (nu - x + 1.5).max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in (1..=nl).rev() {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > 1e200 {
            rjl *= 1e-200;
            rjpl *= 1e-200;
            rjl1 *= 1e-200;
            rjp1 *= 1e-200;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;
    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mut rj = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            rj = -rj;
        }
        rjmu = rj;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    let fct = rjmu / rjl;
    let rj = rjl1 * fct;
    let rjp = rjp1 * fct;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let ry = rymu;
    let ryp = nu * xi * rymu - ry1;
    (rj, ry, rjp, ryp)
}

fn steed_riccati(nu: f64, x: f64) -> RiccatiBessel {
    let (j, y, jp, yp) = steed(nu, x);
    let s = (PI * x / 2.0).sqrt();
    let ds = s / (2.0 * x);
    RiccatiBessel {
        j: s * j,
        n: -s * y,
        jp: ds * j + s * jp,
        np: -(ds * y + s * yp),
        scale: 0.0,
    }
}

/// Evaluates the pair and reports which method was used.
pub fn riccati_bessel_with_method(nu: f64, x: f64) -> (RiccatiBessel, BesselMethod) {
    assert!(
        nu >= 0.0 && x > 0.0,
        "riccati_bessel needs nu >= 0 and x > 0"
    );
    if x > 25.0 && x > 0.6 * nu * nu {
        if let Some(r) = hankel_large_x(nu, x) {
            return (r, BesselMethod::Hankel);
        }
    }
    if nu >= DEBYE_MIN_ORDER {
        let gap = (x - nu).abs() / nu.cbrt();
        if gap > 1.5 {
            if x > nu {
                if let Some(r) = debye_oscillatory(nu, x) {
                    return (r, BesselMethod::DebyeOscillatory);
                }
            } else if let Some(r) = debye_forbidden(nu, x) {
                return (r, BesselMethod::DebyeForbidden);
            }
        }
    }
    (steed_riccati(nu, x), BesselMethod::Steed)
}

/// `(ĵ_ν(x), n̂_ν(x), ĵ'_ν(x), n̂'_ν(x))`, possibly scaled (see [`RiccatiBessel`]).
pub fn riccati_bessel(nu: f64, x: f64) -> RiccatiBessel {
    riccati_bessel_with_method(nu, x).0
}

/// Continuous phase `θ₀` with `ĵ = M sin θ₀`, `n̂ = M cos θ₀`, `θ₀(0+) = 0`,
/// together with the modulus squared `M² = ĵ² + n̂²` (scaled by `e^{-2s}`) and `s`.
pub fn free_phase(nu: f64, x: f64, rb: &RiccatiBessel) -> f64 {
    let ratio = rb.j / rb.n * (-2.0 * rb.scale).exp();
    let principal = if rb.scale > 0.0 {
        ratio.atan()
    } else {
        rb.j.atan2(rb.n)
    };
    let approx = if x > nu {
        let w = ((x - nu) * (x + nu)).sqrt();
        w - nu * w.atan2(nu) + FRAC_PI_4
    } else {
        0.0
    };
    let m = ((approx - principal) / (2.0 * PI)).round();
    principal + 2.0 * PI * m
}
