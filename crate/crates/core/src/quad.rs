//! Trapezoid quadrature on uniform grids, plus small least-squares helpers.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Trapezoid rule on a uniform grid:
/// `step * (sum(values) - (first + last)/2)`. Linear in `values`.
pub fn trapezoid_integral(values: &[Complex64], step: f64) -> Result<Complex64> {
    if values.is_empty() {
        return Err(Error::InvalidInput("cannot integrate an empty sequence".into()));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    let sum: Complex64 = values.iter().sum();
    Ok(step * (sum - 0.5 * (values[0] + values[values.len() - 1])))
}

/// Per-point trapezoid weights `w_k` with `sum w_k f_k = trapezoid_integral`.
pub fn trapezoid_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; n];
    if n >= 2 {
        w[0] = 0.5 * step;
        w[n - 1] = 0.5 * step;
    }
    w
}

/// `∫ |f|^2` with trapezoid weights.
pub fn weighted_norm_sqr(values: &[Complex64], step: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let sum: f64 = values.iter().map(|z| z.norm_sqr()).sum();
    step * (sum - 0.5 * (values[0].norm_sqr() + values[values.len() - 1].norm_sqr()))
}

/// `∫ f conj(g)` with trapezoid weights; the inner product behind every
/// orthogonality check here.
pub fn weighted_inner(f: &[Complex64], g: &[Complex64], step: f64) -> Complex64 {
    debug_assert_eq!(f.len(), g.len());
    let n = f.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc += f[i] * g[i].conj();
    }
    acc -= 0.5 * (f[0] * g[0].conj() + f[n - 1] * g[n - 1].conj());
    step * acc
}

/// Complex scalar `c` minimizing `||f - c*g||`, with the trapezoid metric.
/// Returns zero when `g` is identically zero.
pub fn best_fit_scalar(f: &[Complex64], g: &[Complex64], step: f64) -> Complex64 {
    let den = weighted_norm_sqr(g, step);
    if den == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    weighted_inner(f, g, step) / den
}

/// Relative L2 error `||f - g|| / ||f||` (trapezoid metric).
pub fn rel_l2_error(f: &[Complex64], g: &[Complex64], step: f64) -> f64 {
    let diff: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a - b).collect();
    let num = weighted_norm_sqr(&diff, step);
    let den = weighted_norm_sqr(f, step);
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (num / den).sqrt()
}

/// Least-squares line fit through `(x, y)` pairs; returns `(slope, intercept)`.
pub fn line_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("line fit needs at least two points".into()));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return Err(Error::InvalidInput("degenerate abscissae in line fit".into()));
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}
