//! Discrete special affine Fourier transform (SAFT).
//!
//! Forward evaluation offers two paths that must agree: direct trapezoid
//! quadrature of the kernel integral (the oracle), and a chirp/FFT/chirp
//! factorization valid when the frequency axis lands on FFT bins of a
//! zero-padded grid. Both use identical trapezoid weights, so agreement is
//! limited only by floating-point error.

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::par;
use crate::params::SaftParams;
use crate::quad;
use crate::signal::SampledSignal;
use num_complex::Complex64;
use std::f64::consts::PI;

/// SAFT coefficients over a uniform frequency axis.
#[derive(Debug, Clone)]
pub struct SaftSpectrum {
    pub values: Vec<Complex64>,
    pub axis: UniformAxis,
    pub params: SaftParams,
}

impl SaftSpectrum {
    pub fn frequencies(&self) -> Vec<f64> {
        self.axis.values()
    }

    /// Squared L2 norm over the frequency axis (trapezoid weights).
    pub fn energy(&self) -> f64 {
        quad::weighted_norm_sqr(&self.values, self.axis.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Direct,
    Fast,
}

/// Kernel `K_N(t, w) = K_B exp{ i/(2B) (A t^2 + 2t(p-w) - 2w(Dp - Bq) + D(w^2 + p^2)) }`.
/// Its modulus is `1/sqrt(2 pi |B|)` for all `(t, w)`.
pub fn saft_kernel(t: f64, w: f64, params: &SaftParams) -> Complex64 {
    let (a, b, d, p, q) = (
        params.a_coef,
        params.b_coef,
        params.d_coef,
        params.p_off,
        params.q_off,
    );
    let phase = (a * t * t + 2.0 * t * (p - w) - 2.0 * w * (d * p - b * q) + d * (w * w + p * p))
        / (2.0 * b);
    params.k_b() * Complex64::from_polar(1.0, phase)
}

/// Forward SAFT of a sampled signal on the requested frequency axis.
pub fn saft_forward(
    f: &SampledSignal,
    params: &SaftParams,
    w_axis: UniformAxis,
    path: Path,
) -> Result<SaftSpectrum> {
    match path {
        Path::Direct => Ok(saft_forward_direct(f, params, w_axis)),
        Path::Fast => saft_forward_fast(f, params, w_axis),
    }
}

fn saft_forward_direct(f: &SampledSignal, params: &SaftParams, w_axis: UniformAxis) -> SaftSpectrum {
    let times = f.times();
    let weights = quad::trapezoid_weights(f.len(), f.dt());
    let weighted: Vec<Complex64> = f
        .samples()
        .iter()
        .zip(&weights)
        .map(|(&z, &w)| z * w)
        .collect();
    let values = par::map_indexed(w_axis.count, |j| {
        let w = w_axis.value(j);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &t) in times.iter().enumerate() {
            acc += weighted[i] * saft_kernel(t, w, params);
        }
        acc
    });
    SaftSpectrum { values, axis: w_axis, params: *params }
}

/// Chirp/FFT/chirp factorization of the kernel:
/// `S_N[f](w) = K_B e^{i/(2B)(-2w(Dp-Bq) + D(w^2+p^2))} * G(w/B)` where
/// `G` is the Fourier integral of `g(t) = f(t) e^{i/(2B)(A t^2 + 2 t p)}`.
/// Requires the requested axis to align with FFT bins of the zero-padded
/// grid: `dw = 2 pi |B| r / (L dt)` and `w0` on a bin, for some pad `L` and
/// integer stride `r`.
fn saft_forward_fast(f: &SampledSignal, params: &SaftParams, w_axis: UniformAxis) -> Result<SaftSpectrum> {
    let (a, b, d, p, q) = (
        params.a_coef,
        params.b_coef,
        params.d_coef,
        params.p_off,
        params.q_off,
    );
    let n = f.len();
    let dt = f.dt();
    let t0 = f.t0();

    // find pad length L and stride r with dw = 2 pi |B| r/(L dt)
    let mut found: Option<(usize, i64)> = None;
    for r in 1..=8u32 {
        let l = 2.0 * PI * b.abs() * r as f64 / (w_axis.step * dt);
        let lr = l.round();
        if (l - lr).abs() < 1e-6 && lr >= n as f64 && lr < 1e8 {
            found = Some((lr as usize, r as i64));
            break;
        }
    }
    let (l, r) = found.ok_or_else(|| {
        Error::InvalidInput(format!(
            "fast path needs dw = 2*pi*|B|*r/(L*dt) for integers r <= 8, L >= n; got dw = {}",
            w_axis.step
        ))
    })?;
    // offset bin: w0/B = 2 pi k0 / (L dt)
    let k0_exact = w_axis.start * (l as f64) * dt / (2.0 * PI * b);
    let k0 = k0_exact.round();
    if (k0_exact - k0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "fast path needs w0 aligned to an FFT bin; w0 = {} is {} bins",
            w_axis.start, k0_exact
        )));
    }
    let k0 = k0 as i64;
    // stride in bins: dw corresponds to r bins of size 2 pi B/(L dt); sign of B
    // flips the direction of traversal.
    let rstep = if b > 0.0 { r } else { -r };

    let weights = quad::trapezoid_weights(n, dt);
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    for (i, &z) in f.samples().iter().enumerate() {
        let t = t0 + dt * i as f64;
        let chirp = Complex64::from_polar(1.0, (a * t * t + 2.0 * t * p) / (2.0 * b));
        buf[i] = z * chirp * weights[i];
    }
    crate::fft::fft_in_place(&mut buf);

    let kb = params.k_b();
    let values: Vec<Complex64> = (0..w_axis.count)
        .map(|j| {
            let w = w_axis.value(j);
            let k = k0 + rstep * j as i64;
            let idx = k.rem_euclid(l as i64) as usize;
            // e^{-i t0 xi} with xi = w/B accounts for the grid origin
            let origin = Complex64::from_polar(1.0, -t0 * w / b);
            let post = Complex64::from_polar(
                1.0,
                (-2.0 * w * (d * p - b * q) + d * (w * w + p * p)) / (2.0 * b),
            );
            kb * post * origin * buf[idx]
        })
        .collect();
    Ok(SaftSpectrum { values, axis: w_axis, params: *params })
}

/// Inverse SAFT via the inverse-matrix kernel, evaluated on `t_axis`:
/// `f(t) = ∫ S_N[f](w) K_{N^{-1}}(w, t) dw`.
///
/// For nonzero offsets `(p, q)` this reproduces the signal up to a constant
/// unit-modulus phase (the inverse kernel as defined omits it); round-trip
/// tests report the best-fit scalar.
pub fn saft_inverse(spectrum: &SaftSpectrum, t_axis: UniformAxis) -> Result<SampledSignal> {
    let inv = spectrum.params.inverse();
    let freqs: Vec<f64> = spectrum.frequencies();
    let weights = quad::trapezoid_weights(freqs.len(), spectrum.axis.step);
    let weighted: Vec<Complex64> = spectrum
        .values
        .iter()
        .zip(&weights)
        .map(|(&z, &w)| z * w)
        .collect();
    let samples = par::map_indexed(t_axis.count, |i| {
        let t = t_axis.value(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &w) in freqs.iter().enumerate() {
            acc += weighted[j] * saft_kernel(w, t, &inv);
        }
        acc
    });
    SampledSignal::new(samples, t_axis.start, t_axis.step)
}

/// Special affine convolution
/// `(f *_N g)(b) = K_B ∫ f(t) g(b-t) e^{i/(2B)(D p^2 - 2 A t (b-t))} dt`,
/// returned on the full support grid `b = t0_f + t0_g + k dt`.
///
/// The chirp factors as
/// `e^{-iA t(b-t)/B} = e^{iA t^2/(2B)} e^{iA (b-t)^2/(2B)} e^{-iA b^2/(2B)}`,
/// so the sum is an ordinary linear convolution of chirped inputs.
pub fn saft_convolve(
    f: &SampledSignal,
    g: &SampledSignal,
    params: &SaftParams,
) -> Result<SampledSignal> {
    f.check_commensurate(g)?;
    let (a, b, d, p) = (params.a_coef, params.b_coef, params.d_coef, params.p_off);
    let dt = f.dt();
    let chirp = |t: f64| Complex64::from_polar(1.0, a * t * t / (2.0 * b));
    let weights = quad::trapezoid_weights(f.len(), dt);
    let x: Vec<Complex64> = f
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let t = f.t0() + dt * i as f64;
            z * chirp(t) * weights[i]
        })
        .collect();
    let y: Vec<Complex64> = g
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let s = g.t0() + dt * i as f64;
            z * chirp(s)
        })
        .collect();
    let conv = crate::fft::linear_convolve(&x, &y);
    let b0 = f.t0() + g.t0();
    let kb = params.k_b();
    let pre = kb * Complex64::from_polar(1.0, d * p * p / (2.0 * b));
    let samples: Vec<Complex64> = conv
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let bv = b0 + dt * k as f64;
            pre * Complex64::from_polar(1.0, -a * bv * bv / (2.0 * b)) * z
        })
        .collect();
    SampledSignal::new(samples, b0, dt)
}
