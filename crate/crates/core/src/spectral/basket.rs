//! A fixed basket of test functions in the weighted space, normalized to `‖f‖_w = 1`.

use num_complex::Complex64;

use super::{expm1_i, TWO_PI};

#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    raw: fn(Complex64) -> Complex64,
    /// `1 / sup |raw(z)/(z-1)|`.
    pub scale: f64,
}

impl TestFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.raw)(z) * self.scale
    }
}

/// `sup_{z ≠ 1} |f(z)/(z-1)|`: grid search on the circle, then golden-section refinement
/// around the best node.
pub fn weighted_norm(f: &dyn Fn(Complex64) -> Complex64, samples: usize) -> f64 {
    let ratio = |t: f64| f(Complex64::from_polar(1.0, t)).norm() / expm1_i(t).norm();
    let step = TWO_PI / samples as f64;
    let (mut best, mut m) = (1, 0.0);
    for i in 1..samples {
        let r = ratio(step * i as f64);
        if r > m {
            (best, m) = (i, r);
        }
    }
    let (mut a, mut b) = (step * (best as f64 - 1.0), step * (best as f64 + 1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        let (rc, rd) = (ratio(c), ratio(d));
        m = m.max(rc).max(rd);
        if rc > rd {
            b = d;
        } else {
            a = c;
        }
    }
    m
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn bump(z: Complex64) -> Complex64 {
    // Supported where Re z < 0, vanishing to second order at the edges.
    let c = (-z.re).max(0.0);
    Complex64::new(c * c, 0.0)
}

/// Ten functions used for the uniform weighted bound.
pub fn weighted_basket() -> Vec<TestFunction> {
    let raw: [(&'static str, fn(Complex64) -> Complex64); 10] = [
        ("z-1", |z| z - one()),
        ("(z-1)z", |z| (z - one()) * z),
        ("(z-1)z^2", |z| (z - one()) * z * z),
        ("z^2-1", |z| z * z - one()),
        ("z^3-1", |z| z * z * z - one()),
        ("|z-1|", |z| Complex64::new((z - one()).norm(), 0.0)),
        ("(z-1)Re z", |z| (z - one()) * z.re),
        ("(z-1)Im z", |z| (z - one()) * z.im),
        ("|z-1|^2", |z| Complex64::new((z - one()).norm_sqr(), 0.0)),
        ("bump", bump),
    ];
    raw.iter()
        .map(|&(name, f)| TestFunction {
            name,
            raw: f,
            scale: 1.0 / weighted_norm(&f, 1 << 16),
        })
        .collect()
}
