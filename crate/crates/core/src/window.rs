//! Window functions and their moment queries.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Analysis window. Analytic kinds evaluate exactly at arbitrary arguments;
/// sampled windows interpolate linearly and vanish outside their range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowSpec {
    /// `Psi(t) = e^{-pi t^2}`.
    GaussianPi,
    /// `Psi(t) = e^{-t^2/(2 dgs^2)} / sqrt(2 pi dgs)`; larger `dgs` trades
    /// time resolution for frequency resolution.
    GaussianDgs { delta_gs: f64 },
    Sampled {
        samples: Vec<(f64, f64)>,
        t0: f64,
        dt: f64,
    },
}

impl WindowSpec {
    pub fn gaussian_dgs(delta_gs: f64) -> Result<Self> {
        if !(delta_gs > 0.0) || !delta_gs.is_finite() {
            return Err(Error::InvalidWindow(format!("delta_gs must be positive, got {delta_gs}")));
        }
        Ok(WindowSpec::GaussianDgs { delta_gs })
    }

    pub fn sampled(samples: Vec<Complex64>, t0: f64, dt: f64) -> Result<Self> {
        if samples.is_empty() || !(dt > 0.0) {
            return Err(Error::InvalidWindow("sampled window needs samples and dt > 0".into()));
        }
        let energy = quad::weighted_norm_sqr(&samples, dt);
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::InvalidWindow("sampled window must have finite nonzero energy".into()));
        }
        Ok(WindowSpec::Sampled {
            samples: samples.iter().map(|z| (z.re, z.im)).collect(),
            t0,
            dt,
        })
    }

    /// Construct a sampled window without the energy validation, for tests
    /// that need a deliberately inadmissible (e.g. all-zero) window.
    pub fn sampled_unchecked(samples: Vec<Complex64>, t0: f64, dt: f64) -> Self {
        WindowSpec::Sampled {
            samples: samples.iter().map(|z| (z.re, z.im)).collect(),
            t0,
            dt,
        }
    }

    /// Pointwise evaluation `Psi(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            WindowSpec::GaussianPi => Complex64::new((-PI * x * x).exp(), 0.0),
            WindowSpec::GaussianDgs { delta_gs } => Complex64::new(
                (-x * x / (2.0 * delta_gs * delta_gs)).exp() / (2.0 * PI * delta_gs).sqrt(),
                0.0,
            ),
            WindowSpec::Sampled { samples, t0, dt } => {
                let pos = (x - t0) / dt;
                if pos < 0.0 || pos > (samples.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let i = pos.floor() as usize;
                if i + 1 >= samples.len() {
                    let (re, im) = samples[samples.len() - 1];
                    return Complex64::new(re, im);
                }
                let frac = pos - i as f64;
                let (r0, i0) = samples[i];
                let (r1, i1) = samples[i + 1];
                Complex64::new(r0 + frac * (r1 - r0), i0 + frac * (i1 - i0))
            }
        }
    }

    /// Half-width of the effective support (where the window is numerically
    /// nonzero), used to build quadrature grids for window integrals.
    pub fn support_halfwidth(&self) -> f64 {
        match self {
            WindowSpec::GaussianPi => 6.0 / (2.0 * PI).sqrt() * (2.0f64).sqrt().max(1.0), // ~8 sigma of |psi|
            WindowSpec::GaussianDgs { delta_gs } => 8.0 * delta_gs,
            WindowSpec::Sampled { samples, t0, dt } => {
                let hi = t0 + dt * (samples.len() - 1) as f64;
                t0.abs().max(hi.abs())
            }
        }
    }

    /// Center `E_psi` (first moment of `|Psi|^2`), numeric.
    pub fn center(&self) -> Result<f64> {
        let (e, _d) = self.moments()?;
        Ok(e)
    }

    /// Radius `Delta_psi` (root second central moment of `|Psi|^2`), numeric.
    pub fn radius(&self) -> Result<f64> {
        let (_e, d) = self.moments()?;
        Ok(d)
    }

    /// `(center, radius)` of `|Psi|^2` by quadrature on the support grid.
    pub fn moments(&self) -> Result<(f64, f64)> {
        let (grid, step) = self.quadrature_grid(4096);
        let w = quad::trapezoid_weights(grid.len(), step);
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        for (i, &x) in grid.iter().enumerate() {
            let p = self.eval(x).norm_sqr() * w[i];
            m0 += p;
            m1 += x * p;
        }
        if !(m0 > 0.0) || !m0.is_finite() {
            return Err(Error::InvalidWindow("window has no usable energy".into()));
        }
        let e = m1 / m0;
        let mut m2 = 0.0;
        for (i, &x) in grid.iter().enumerate() {
            m2 += (x - e) * (x - e) * self.eval(x).norm_sqr() * w[i];
        }
        Ok((e, (m2 / m0).sqrt()))
    }

    pub fn energy(&self) -> f64 {
        let (grid, step) = self.quadrature_grid(4096);
        let vals: Vec<Complex64> = grid.iter().map(|&x| self.eval(x)).collect();
        quad::weighted_norm_sqr(&vals, step)
    }

    /// Symmetric uniform grid covering the support with at least `n` points.
    pub fn quadrature_grid(&self, n: usize) -> (Vec<f64>, f64) {
        let h = self.support_halfwidth().max(1e-6);
        let n = n.max(64);
        let step = 2.0 * h / (n - 1) as f64;
        ((0..n).map(|i| -h + step * i as f64).collect(), step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_pi_moments() {
        let w = WindowSpec::GaussianPi;
        let (e, d) = w.moments().unwrap();
        assert!(e.abs() < 1e-12);
        // |psi|^2 = e^{-2 pi t^2}: radius = 1/(2 sqrt(pi))
        assert!((d - 0.5 / PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn dgs_moments_scale_with_delta() {
        let w = WindowSpec::gaussian_dgs(12.0).unwrap();
        let (e, d) = w.moments().unwrap();
        assert!(e.abs() < 1e-9);
        // |psi|^2 ~ e^{-t^2/dgs^2}: radius = dgs/sqrt(2)
        assert!((d - 12.0 / 2f64.sqrt()).abs() < 1e-6 * 12.0);
    }

    #[test]
    fn invalid_windows_rejected() {
        assert!(WindowSpec::gaussian_dgs(0.0).is_err());
        assert!(WindowSpec::sampled(vec![Complex64::new(0.0, 0.0); 8], 0.0, 0.1).is_err());
        let zero = WindowSpec::sampled_unchecked(vec![Complex64::new(0.0, 0.0); 8], 0.0, 0.1);
        assert!(zero.moments().is_err());
    }

    #[test]
    fn sampled_window_interpolates_and_clips() {
        let samples = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let w = WindowSpec::sampled(samples, -1.0, 1.0).unwrap();
        assert!((w.eval(-0.5).re - 0.5).abs() < 1e-15);
        assert_eq!(w.eval(5.0), Complex64::new(0.0, 0.0));
    }
}
