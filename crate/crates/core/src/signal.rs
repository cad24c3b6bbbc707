//! Uniformly sampled complex signals.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;

/// A complex-valued signal sampled at `t_k = t0 + k*dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<Complex64>,
    t0: f64,
    dt: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>, t0: f64, dt: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal has no samples".into()));
        }
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "signal needs finite t0 and dt > 0 (t0={t0}, dt={dt})"
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("signal contains non-finite samples".into()));
        }
        Ok(Self { samples, t0, dt })
    }

    /// Sample the closure on `t_k = t0 + k*dt`, `k = 0..n`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..n).map(|k| f(t0 + dt * k as f64)).collect();
        Self::new(samples, t0, dt)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one sample
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.t0 + self.dt * k as f64).collect()
    }

    pub fn duration(&self) -> f64 {
        self.dt * (self.len().saturating_sub(1)) as f64
    }

    /// Squared L2 norm via trapezoid weights.
    pub fn energy(&self) -> f64 {
        quad::weighted_norm_sqr(&self.samples, self.dt)
    }

    /// Pointwise map preserving the grid.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, &z)| f(self.t0 + self.dt * k as f64, z))
            .collect();
        Self { samples, t0: self.t0, dt: self.dt }
    }

    /// Modulation `e^{i c t} f(t)`.
    pub fn modulate(&self, c: f64) -> Self {
        self.map(|t, z| Complex64::from_polar(1.0, c * t) * z)
    }

    /// Fraction of energy in the outer 5% of the time window, a diagnostic
    /// for out-of-support truncation (the transforms assume the signal is
    /// effectively supported inside its sample range).
    pub fn edge_energy_fraction(&self) -> f64 {
        let total = self.energy();
        if total == 0.0 {
            return 0.0;
        }
        let n = self.len();
        let k = ((n as f64) * 0.05).ceil() as usize;
        let k = k.clamp(1, n);
        let w = quad::trapezoid_weights(n, self.dt);
        let edge: f64 = (0..k)
            .map(|i| self.samples[i].norm_sqr() * w[i] + self.samples[n - 1 - i].norm_sqr() * w[n - 1 - i])
            .sum();
        edge / total
    }

    /// Require the same dt (relative 1e-9) as `other`.
    pub fn check_commensurate(&self, other: &Self) -> Result<()> {
        if (self.dt - other.dt).abs() > 1e-9 * self.dt {
            return Err(Error::GridMismatch(format!(
                "dt {} vs {}",
                self.dt, other.dt
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_bad_grid() {
        assert!(SampledSignal::new(vec![], 0.0, 0.1).is_err());
        assert!(SampledSignal::new(vec![Complex64::new(1.0, 0.0)], 0.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![Complex64::new(f64::NAN, 0.0)], 0.0, 0.1).is_err());
    }

    #[test]
    fn energy_of_constant_on_unit_interval() {
        let f = SampledSignal::from_fn(0.0, 1.0 / 1000.0, 1001, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((f.energy() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn energy_of_gaussian() {
        // ∫ e^{-2 pi t^2} dt = 2^{-1/2}
        let n = 4097;
        let f = SampledSignal::from_fn(-8.0, 16.0 / (n as f64 - 1.0), n, |t| {
            Complex64::new((-std::f64::consts::PI * t * t).exp(), 0.0)
        })
        .unwrap();
        assert!((f.energy() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn zero_signal_energy() {
        let f = SampledSignal::new(vec![Complex64::new(0.0, 0.0); 16], 0.0, 0.5).unwrap();
        assert_eq!(f.energy(), 0.0);
    }
}
