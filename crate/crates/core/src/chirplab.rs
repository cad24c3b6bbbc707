//! LFM chirp synthesis, ridge extraction, method comparison and the
//! echo-filtering pipeline.
//!
//! Unit convention: chirp components are specified in Hz (`alpha`) and Hz/s
//! (`beta`), i.e. `f(t) = sum_r amp_r e^{i 2 pi (alpha_r t + beta_r t^2)}`,
//! while every transform in this crate works in angular frequency. The
//! mapping is fixed here once: the instantaneous angular frequency is
//! `omega(t) = 2 pi (alpha + 2 beta t)`, and a SAST ridge for matrix
//! `(A, B, ...)` sits at scale `a*(b) = omega(b) + (A/B) b`, slope
//! `4 pi beta + A/B` and intercept `2 pi alpha` in `b`.

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::grid::{Provenance, TfrGrid, TransformTag};
use crate::par;
use crate::params::SaftParams;
use crate::quad;
use crate::sast;
use crate::signal::SampledSignal;
use crate::stockwell;
use crate::window::WindowSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One LFM component: initial frequency (Hz), frequency rate (Hz/s),
/// complex amplitude.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LfmComponent {
    pub alpha: f64,
    pub beta: f64,
    /// `(re, im)`
    pub amplitude: (f64, f64),
}

/// Multi-component LFM signal description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LfmSpec {
    pub components: Vec<LfmComponent>,
    pub duration: f64,
    pub sample_rate: f64,
}

impl LfmSpec {
    pub fn mono(alpha: f64, beta: f64, duration: f64, sample_rate: f64) -> Self {
        Self {
            components: vec![LfmComponent { alpha, beta, amplitude: (1.0, 0.0) }],
            duration,
            sample_rate,
        }
    }

    /// Largest instantaneous frequency magnitude (Hz) over the duration.
    pub fn max_instantaneous_frequency(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| [c.alpha.abs(), (c.alpha + 2.0 * c.beta * self.duration).abs()])
            .fold(0.0, f64::max)
    }
}

/// Synthesize the chirp on `t_k = k / sample_rate`. Fails when the sample
/// rate does not exceed twice the maximal instantaneous frequency.
pub fn synth_lfm(spec: &LfmSpec) -> Result<SampledSignal> {
    if spec.components.is_empty() || !(spec.duration > 0.0) || !(spec.sample_rate > 0.0) {
        return Err(Error::InvalidInput("chirp spec needs components, duration and rate".into()));
    }
    let fmax = spec.max_instantaneous_frequency();
    if spec.sample_rate <= 2.0 * fmax {
        return Err(Error::AliasError(format!(
            "sample rate {} Hz must exceed twice the max instantaneous frequency {fmax} Hz",
            spec.sample_rate
        )));
    }
    let n = (spec.sample_rate * spec.duration).round() as usize;
    let dt = 1.0 / spec.sample_rate;
    SampledSignal::from_fn(0.0, dt, n.max(1), |t| {
        spec.components
            .iter()
            .map(|c| {
                Complex64::new(c.amplitude.0, c.amplitude.1)
                    * Complex64::from_polar(1.0, 2.0 * PI * (c.alpha * t + c.beta * t * t))
            })
            .sum()
    })
}

/// Delayed, attenuated copy: `n(t) = attenuation * f(t - delay)`, with the
/// delay snapped to the sample grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EchoSpec {
    pub delay: f64,
    /// `(re, im)`, `|attenuation| <= 1`
    pub attenuation: (f64, f64),
}

pub fn add_echo(f: &SampledSignal, echo: &EchoSpec) -> Result<SampledSignal> {
    let att = Complex64::new(echo.attenuation.0, echo.attenuation.1);
    if att.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("|attenuation| = {} > 1", att.norm())));
    }
    if !(echo.delay >= 0.0) || echo.delay >= f.duration() {
        return Err(Error::InvalidInput(format!(
            "delay {} must lie in [0, duration)",
            echo.delay
        )));
    }
    let shift = (echo.delay / f.dt()).round() as usize;
    let mut samples = f.samples().to_vec();
    for i in shift..samples.len() {
        samples[i] += att * f.samples()[i - shift];
    }
    SampledSignal::new(samples, f.t0(), f.dt())
}

/// One ridge sample: the scale of maximal modulus in a translation column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgePoint {
    pub translation: f64,
    pub scale: f64,
    pub magnitude: f64,
}

/// Per translation, the scale of maximum modulus; ties break toward the
/// smaller scale; all-zero columns yield no point.
pub fn ridge_extract(grid: &TfrGrid) -> Vec<RidgePoint> {
    let m = grid.n_translations();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut best = 0.0f64;
        let mut jbest = None;
        for j in 0..grid.n_scales() {
            let v = grid.at(j, k).norm();
            if v > best {
                best = v;
                jbest = Some(j);
            }
        }
        if let Some(j) = jbest {
            out.push(RidgePoint {
                translation: grid.translations()[k],
                scale: grid.scales()[j],
                magnitude: best,
            });
        }
    }
    out
}

/// Least-squares line through the ridge points with translations inside
/// `[b_lo, b_hi]`; returns `(slope, intercept)`.
pub fn ridge_line_fit(points: &[RidgePoint], b_lo: f64, b_hi: f64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.translation >= b_lo && p.translation <= b_hi)
        .map(|p| (p.translation, p.scale))
        .collect();
    quad::line_fit(&pts)
}

/// Transforms the comparison harness can run.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    Stft,
    St,
    Sast { params: SaftParams },
}

#[derive(Debug)]
pub struct MethodReport {
    pub label: String,
    /// `sum |c|^4 / (sum |c|^2)^2`; `None` for an all-zero grid.
    pub concentration: Option<f64>,
    pub grid: TfrGrid,
}

/// Energy-concentration metric (higher = sharper representation).
pub fn concentration(grid: &TfrGrid) -> Option<f64> {
    let e2: f64 = grid.coeffs().iter().map(|z| z.norm_sqr()).sum();
    if e2 == 0.0 {
        return None;
    }
    let e4: f64 = grid.coeffs().iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum();
    Some(e4 / (e2 * e2))
}

/// Run each requested method over the shared axes and report grids plus the
/// concentration metric. Methods are independent and run concurrently.
pub fn compare_methods(
    f: &SampledSignal,
    methods: &[MethodSpec],
    window: &WindowSpec,
    scales: &[f64],
    b_axis: UniformAxis,
) -> Result<Vec<MethodReport>> {
    if methods.is_empty() {
        return Err(Error::InvalidInput("no methods requested".into()));
    }
    let reports: Vec<Result<MethodReport>> = par::map_indexed(methods.len(), |i| {
        let grid = match &methods[i] {
            MethodSpec::Stft => stft_forward(f, window, scales, b_axis)?,
            MethodSpec::St => stockwell::st_forward(f, window, scales, b_axis, stockwell::Path::Fast)
                .or_else(|_| stockwell::st_forward(f, window, scales, b_axis, stockwell::Path::Direct))?,
            MethodSpec::Sast { params } => {
                sast::sast_forward(f, window, params, scales, b_axis, sast::Path::Fast).or_else(
                    |_| sast::sast_forward(f, window, params, scales, b_axis, sast::Path::Direct),
                )?
            }
        };
        let label = match &methods[i] {
            MethodSpec::Stft => "stft".to_string(),
            MethodSpec::St => "st".to_string(),
            MethodSpec::Sast { params } => format!(
                "sast({},{},{},{};{},{})",
                params.a_coef, params.b_coef, params.c_coef, params.d_coef, params.p_off, params.q_off
            ),
        };
        Ok(MethodReport { label, concentration: concentration(&grid), grid })
    });
    reports.into_iter().collect()
}

/// Short-time Fourier transform on the shared axes (the `scales` axis is
/// read as angular frequency):
/// `STFT(w, b) = (1/sqrt(2 pi)) ∫ f(t) conj(Psi(t - b)) e^{-i w t} dt`.
pub fn stft_forward(
    f: &SampledSignal,
    window: &WindowSpec,
    freqs: &[f64],
    b_axis: UniformAxis,
) -> Result<TfrGrid> {
    let dt = f.dt();
    let weights = quad::trapezoid_weights(f.len(), dt);
    let m = b_axis.count;
    let rows: Vec<Vec<Complex64>> = par::map_indexed(freqs.len(), |j| {
        let w = freqs[j];
        (0..m)
            .map(|k| {
                let b = b_axis.value(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, &z) in f.samples().iter().enumerate() {
                    let t = f.t0() + dt * i as f64;
                    acc += z * window.eval(t - b).conj() * Complex64::from_polar(weights[i], -w * t);
                }
                acc / (2.0 * PI).sqrt()
            })
            .collect()
    });
    TfrGrid::new(
        freqs.to_vec(),
        b_axis.values(),
        rows.into_iter().flatten().collect(),
        Provenance {
            params: SaftParams::classical(),
            window: window.clone(),
            transform_tag: TransformTag::Stft,
        },
    )
}

/// Mask-and-invert pipeline: forward SAST, pointwise multiply by real
/// weights in `[0,1]`, inverse SAST back onto the signal grid.
pub fn echo_filter(
    s_in: &SampledSignal,
    mask: &[f64],
    window: &WindowSpec,
    params: &SaftParams,
    c_psi: f64,
    scales: &[f64],
    b_axis: UniformAxis,
) -> Result<SampledSignal> {
    let grid = sast::sast_forward(s_in, window, params, scales, b_axis, sast::Path::Fast)
        .or_else(|_| sast::sast_forward(s_in, window, params, scales, b_axis, sast::Path::Direct))?;
    let masked = grid.apply_mask(mask)?;
    let t_axis = UniformAxis::new(s_in.t0(), s_in.dt(), s_in.len())?;
    sast::sast_inverse(&masked, window, c_psi, t_axis)
}

/// Indicator mask around the analytic LFM ridge of the given component:
/// scale bins within `band_bins` of `a*(b) = 2 pi (alpha + 2 beta clamp(b))
/// + (A/B) b` are kept.
pub fn ridge_band_mask(
    scales: &[f64],
    b_axis: &UniformAxis,
    alpha: f64,
    beta: f64,
    params: &SaftParams,
    duration: f64,
    band_bins: usize,
) -> Vec<f64> {
    let m = b_axis.count;
    let mut mask = vec![0.0; scales.len() * m];
    for k in 0..m {
        let b = b_axis.value(k);
        let bb = b.clamp(0.0, duration);
        let target = 2.0 * PI * (alpha + 2.0 * beta * bb) + params.a_coef / params.b_coef * b;
        if target <= 0.0 {
            continue;
        }
        let j0 = (0..scales.len())
            .min_by(|&i, &j| (scales[i] - target).abs().total_cmp(&(scales[j] - target).abs()))
            .unwrap();
        let lo = j0.saturating_sub(band_bins);
        let hi = (j0 + band_bins).min(scales.len() - 1);
        for j in lo..=hi {
            mask[j * m + k] = 1.0;
        }
    }
    mask
}

/// Effective-bandwidth lower bound `B^2 C_psi / (4 T_u^2)` where `T_u` is
/// the time spread (root central second moment) of `|f|^2`.
pub fn effective_bandwidth_bound(
    f: &SampledSignal,
    params: &SaftParams,
    c_psi: f64,
) -> Result<f64> {
    let t_u = time_spread(f)?;
    Ok(params.b_coef * params.b_coef * c_psi / (4.0 * t_u * t_u))
}

/// Root central second moment of `|f|^2`.
pub fn time_spread(f: &SampledSignal) -> Result<f64> {
    let w = quad::trapezoid_weights(f.len(), f.dt());
    let times = f.times();
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    for (i, &z) in f.samples().iter().enumerate() {
        let p = z.norm_sqr() * w[i];
        m0 += p;
        m1 += times[i] * p;
    }
    if !(m0 > 0.0) {
        return Err(Error::InvalidSignal("zero signal has no time spread".into()));
    }
    let c = m1 / m0;
    let mut m2 = 0.0;
    for (i, &z) in f.samples().iter().enumerate() {
        m2 += (times[i] - c) * (times[i] - c) * z.norm_sqr() * w[i];
    }
    Ok((m2 / m0).sqrt())
}

/// The committed demonstration configuration (axes, windows, parameter
/// matrices) keeping the chirp experiments reproducible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoConfig {
    pub schema_version: u32,
    pub sample_rate: f64,
    pub duration: f64,
    /// Mono-component demo chirp.
    pub components: Vec<LfmComponent>,
    /// Bi-component demo chirp.
    pub bi_components: Vec<LfmComponent>,
    /// Default analysis window.
    pub window: WindowSpec,
    /// Narrower time-frequency demo window.
    pub window_narrow: WindowSpec,
    /// Wide window used by the separation experiments (echo, bi-component).
    pub window_sep: WindowSpec,
    /// Demonstration matrix 1 (non-unimodular; loaded with the override).
    pub params: [f64; 6],
    /// Demonstration matrix 2 (non-unimodular; loaded with the override).
    pub params_alt: [f64; 6],
    /// Chirp-rate-matched matrix: `-2A/B = 4 pi beta`, unimodular.
    pub params_tuned: [f64; 6],
    /// Scale-axis spec (`log:lo:hi:n` or `lin:lo:hi:n`) for TFR grids.
    pub scales: String,
    pub echo: EchoExperiment,
    pub bicomp: BicompExperiment,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EchoExperiment {
    pub delay: f64,
    pub attenuation: f64,
    pub scales: String,
    pub band_bins: usize,
    /// Translation-axis padding (samples) on each side of the signal.
    pub pad: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BicompExperiment {
    pub scales: String,
    pub t_lo: f64,
    pub t_hi: f64,
    pub b_decimate: usize,
    /// Inter-ridge band half-width as a fraction of the ridge separation.
    pub band_fraction: f64,
}

impl DemoConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: DemoConfig =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("demo config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn mono_spec(&self) -> LfmSpec {
        LfmSpec {
            components: self.components.clone(),
            duration: self.duration,
            sample_rate: self.sample_rate,
        }
    }

    pub fn bi_spec(&self) -> LfmSpec {
        LfmSpec {
            components: self.bi_components.clone(),
            duration: self.duration,
            sample_rate: self.sample_rate,
        }
    }

    pub fn params_matrix(&self) -> Result<SaftParams> {
        let p = self.params;
        SaftParams::new_non_unimodular(p[0], p[1], p[2], p[3], p[4], p[5])
    }

    pub fn params_alt_matrix(&self) -> Result<SaftParams> {
        let p = self.params_alt;
        SaftParams::new_non_unimodular(p[0], p[1], p[2], p[3], p[4], p[5])
    }

    pub fn params_tuned_matrix(&self) -> Result<SaftParams> {
        let p = self.params_tuned;
        SaftParams::new(p[0], p[1], p[2], p[3], p[4], p[5])
    }
}
