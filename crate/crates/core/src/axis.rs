//! Axis construction and nonuniform quadrature weights.

use crate::error::{Error, Result};

/// Uniform axis described by origin, step and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAxis {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || count == 0 {
            return Err(Error::InvalidInput(format!(
                "axis needs positive step and nonzero count (step={step}, count={count})"
            )));
        }
        Ok(Self { start, step, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.value(self.count.saturating_sub(1))
    }
}

/// `n` logarithmically spaced points over `[lo, hi]`.
pub fn log_axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || n < 2 {
        return Err(Error::InvalidInput(format!(
            "log axis needs 0 < lo < hi and n >= 2 (lo={lo}, hi={hi}, n={n})"
        )));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (n - 1) as f64;
    Ok((0..n).map(|i| (llo + step * i as f64).exp()).collect())
}

/// `n` linearly spaced points over `[lo, hi]`.
pub fn lin_axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(hi > lo) || n < 2 {
        return Err(Error::InvalidInput(format!(
            "linear axis needs lo < hi and n >= 2 (lo={lo}, hi={hi}, n={n})"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

/// Per-point trapezoid weights for a strictly increasing (possibly
/// nonuniform) axis, so that `sum_i w_i f(x_i)` approximates the integral.
pub fn trapezoid_axis_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = 0.5 * (x[i] - x[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    w
}

/// True when every consecutive gap matches `step` to a relative 1e-9.
pub fn is_uniform(x: &[f64], step: f64) -> bool {
    x.windows(2)
        .all(|p| ((p[1] - p[0]) - step).abs() <= 1e-9 * step.abs().max(1.0))
}

/// Parse an axis spec of the form `log:<min>:<max>:<n>` or
/// `lin:<min>:<max>:<n>`.
pub fn parse_axis_spec(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "axis spec '{spec}' must be log:<min>:<max>:<n> or lin:<min>:<max>:<n>"
        )));
    }
    let lo: f64 = parts[1]
        .parse()
        .map_err(|e| Error::InvalidInput(format!("axis spec '{spec}': {e}")))?;
    let hi: f64 = parts[2]
        .parse()
        .map_err(|e| Error::InvalidInput(format!("axis spec '{spec}': {e}")))?;
    let n: usize = parts[3]
        .parse()
        .map_err(|e| Error::InvalidInput(format!("axis spec '{spec}': {e}")))?;
    match parts[0] {
        "log" => log_axis(lo, hi, n),
        "lin" => lin_axis(lo, hi, n),
        other => Err(Error::InvalidInput(format!("unknown axis kind '{other}'"))),
    }
}
