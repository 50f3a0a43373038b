//! Least-squares line fits and Richardson extrapolation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Pearson correlation of the data.
    pub correlation: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
}

/// Ordinary least squares `y = intercept + slope * x`.
pub fn line_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let correlation = if syy == 0.0 {
        1.0
    } else {
        sxy / (sxx * syy).sqrt()
    };
    let (slope_stderr, intercept_stderr) = if n > 2 {
        let rss: f64 = (0..n)
            .map(|i| (y[i] - intercept - slope * x[i]).powi(2))
            .sum();
        let s2 = rss / (nf - 2.0);
        let se_s = (s2 / sxx).sqrt();
        (se_s, (s2 * (1.0 / nf + mx * mx / sxx)).sqrt())
    } else {
        (0.0, 0.0)
    };
    Some(LineFit {
        slope,
        intercept,
        correlation,
        slope_stderr,
        intercept_stderr,
    })
}

/// Fits `log|y| = log|A| + p log x`; entries with `y == 0` are skipped.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b != 0.0 && b.is_finite())
        .map(|(a, b)| (a.ln(), b.abs().ln()))
        .unzip();
    line_fit(&lx, &ly)
}

/// One Richardson step for a sequence with leading error `C * h^p`
/// sampled at `h` and `h / ratio`.
pub fn richardson(coarse: f64, fine: f64, ratio: f64, p: f64) -> f64 {
    let r = ratio.powf(p);
    (r * fine - coarse) / (r - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let f = line_fit(&x, &y).unwrap();
        assert!((f.slope + 3.0).abs() < 1e-14 && (f.intercept - 2.0).abs() < 1e-13);
        assert!((f.correlation + 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_law() {
        let x = [10.0, 20.0, 40.0, 80.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| -5.0 * v.powf(-2.5)).collect();
        let f = power_law_fit(&x, &y).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-12);
    }

    #[test]
    fn richardson_removes_leading_term() {
        let g = |h: f64| 1.0 + 0.3 * h.sqrt();
        assert!((richardson(g(0.1), g(0.05), 2.0, 0.5) - 1.0).abs() < 1e-14);
    }
}
