//! Special affine Stockwell transform: forward (direct and fast paths),
//! inverse, admissibility, special-case reductions, window geometry and the
//! reproducing-kernel range check.

use crate::axis::{self, UniformAxis};
use crate::error::{Error, Result};
use crate::grid::{Provenance, TfrGrid, TransformTag};
use crate::par;
use crate::params::SaftParams;
use crate::quad;
use crate::saft::{saft_kernel, SaftSpectrum};
use crate::signal::SampledSignal;
use crate::stockwell::{self, AnalyzingAtom};
use crate::window::WindowSpec;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub use crate::stockwell::Path;

/// Forward SAST
/// `[SAST f](a,b) = (|a|/sqrt(2 pi)) K_B ∫ f(t) conj(Psi(a(t-b)))
///     e^{-iat - i(2At(b-t) - Dp^2)/(2B)} dt`
/// over positive scales and a uniform translation axis.
///
/// The fast path realizes the chirp / Stockwell / chirp scheme: splitting
/// `e^{-iAtb/B} = e^{-iAt^2/(2B)} e^{-iAb^2/(2B)} e^{iA(t-b)^2/(2B)}` turns
/// the integral into a per-scale linear convolution of the chirp-premodulated
/// signal with a chirped window, followed by a per-translation chirp.
pub fn sast_forward(
    f: &SampledSignal,
    window: &WindowSpec,
    params: &SaftParams,
    scales: &[f64],
    b_axis: UniformAxis,
    path: Path,
) -> Result<TfrGrid> {
    stockwell::validate_scales(scales)?;
    let rows = match path {
        Path::Direct => stockwell::rows_direct(f, window, scales, &b_axis, Some(params)),
        Path::Fast => stockwell::rows_fast(f, window, scales, &b_axis, Some(params))?,
    };
    TfrGrid::new(
        scales.to_vec(),
        b_axis.values(),
        rows,
        Provenance {
            params: *params,
            window: window.clone(),
            transform_tag: TransformTag::Sast,
        },
    )
}

/// Direct-quadrature SAST at a single `(a, b)`; `a` may be negative (used by
/// the parity identity and the Wigner-relation verifier).
pub fn sast_point(
    f: &SampledSignal,
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    b: f64,
) -> Complex64 {
    stockwell::point_value(f, window, a, b, Some(params))
}

/// Named special cases of the parameter matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialVariant {
    /// Linear canonical Stockwell transform: `(A,B,C,D;0,0)`.
    Lcst { a: f64, b: f64, c: f64, d: f64 },
    /// Fractional Stockwell transform: `(cos t, sin t, -sin t, cos t; 0,0)`.
    Frst { theta: f64 },
    /// Fresnel-Stockwell transform: `(1, B, 0, 1; 0,0)`.
    Fresnel { b: f64 },
}

impl SpecialVariant {
    pub fn params(&self) -> Result<SaftParams> {
        match *self {
            SpecialVariant::Lcst { a, b, c, d } => SaftParams::new_non_unimodular(a, b, c, d, 0.0, 0.0),
            SpecialVariant::Frst { theta } => {
                if (theta / PI - (theta / PI).round()).abs() < 1e-12 {
                    return Err(Error::DegenerateAngle(theta));
                }
                SaftParams::new(theta.cos(), theta.sin(), -theta.sin(), theta.cos(), 0.0, 0.0)
            }
            SpecialVariant::Fresnel { b } => SaftParams::new(1.0, b, 0.0, 1.0, 0.0, 0.0),
        }
    }

    pub fn tag(&self) -> TransformTag {
        match self {
            SpecialVariant::Lcst { .. } => TransformTag::Lcst,
            SpecialVariant::Frst { .. } => TransformTag::Frst,
            SpecialVariant::Fresnel { .. } => TransformTag::Fresnel,
        }
    }
}

/// Delegates to [`sast_forward`] with the variant's parameter matrix and
/// tags the grid accordingly.
pub fn sast_special(
    f: &SampledSignal,
    window: &WindowSpec,
    variant: SpecialVariant,
    scales: &[f64],
    b_axis: UniformAxis,
    path: Path,
) -> Result<TfrGrid> {
    let params = variant.params()?;
    let mut grid = sast_forward(f, window, &params, scales, b_axis, path)?;
    grid.provenance.transform_tag = variant.tag();
    Ok(grid)
}

/// Admissibility estimate: for each probe `w` the scale integral
/// `C(w) = ∫ |S_N[chirped Psi](w/a)|^2 da` over the supplied axis, where the
/// chirp is `e^{i(t(1 - (1 - 1/a)p/B) - A t^2 (1 + 1/a^2)/(2B))}`.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub c_psi: f64,
    /// `(w, C(w))` pairs over the probe axis.
    pub per_frequency_values: Vec<(f64, f64)>,
    /// `(max - min)/mean` of `C(w)`: the constant-in-w approximation quality.
    pub max_relative_spread: f64,
    /// Set when the top decade of the scale axis contributes more than 1%
    /// of the integral, i.e. the scale integral has not converged and the
    /// constant is tied to this particular axis.
    pub truncation_warning: bool,
}

pub fn admissibility_constant(
    window: &WindowSpec,
    params: &SaftParams,
    scale_axis: &[f64],
    w_probes: &[f64],
) -> Result<AdmissibilityReport> {
    stockwell::validate_scales(scale_axis)?;
    if w_probes.is_empty() {
        return Err(Error::InvalidInput("probe axis is empty".into()));
    }
    let h = window.support_halfwidth().max(1e-6);
    let sigma_psi = window
        .radius()
        .map_err(|_| Error::NotAdmissible("window has no usable energy".into()))?
        .max(1e-9);
    let (pa, pb, pp) = (params.a_coef, params.b_coef, params.p_off);
    // only evaluations with the kernel frequency inside the modulated
    // window's spectral support matter; prune the rest (their value decays
    // like a 12-sigma Gaussian tail) and size the quadrature grid for the
    // survivors
    let xi_reach = |a: f64| {
        let unit = 1.0 - (1.0 - 1.0 / a) * pp / pb;
        let broaden = pa.abs() * h / (pb.abs() * a * a) + 12.0 / sigma_psi;
        (unit, broaden)
    };
    let a_min = scale_axis[0];
    let xi_max = [a_min, scale_axis[scale_axis.len() - 1]]
        .into_iter()
        .map(|a| {
            let (u, r) = xi_reach(a);
            u.abs() + r
        })
        .fold(0.0, f64::max);
    let rate = xi_max + 1.0 + (pp / pb).abs() + pa.abs() * h / (pb.abs() * a_min * a_min);
    let n = (((2.0 * h * rate / std::f64::consts::PI) * 6.0).ceil() as usize).clamp(2048, 1 << 16);
    let (grid_y, step_y) = window.quadrature_grid(n);
    let wt = quad::trapezoid_weights(grid_y.len(), step_y);
    let aw = axis::trapezoid_axis_weights(scale_axis);
    let a_min_decade = scale_axis[scale_axis.len() - 1] / 10.0;

    // per scale: C_j(w) contribution at every probe, reduced in scale order
    let per_scale: Vec<Vec<f64>> = par::map_indexed(scale_axis.len(), |j| {
        let a = scale_axis[j];
        let chirped: Vec<Complex64> = grid_y
            .iter()
            .enumerate()
            .map(|(i, &y)| chirped_window_value(window, params, a, y, true) * wt[i])
            .collect();
        let (unit, broaden) = xi_reach(a);
        w_probes
            .iter()
            .map(|&w| {
                let xi = (w / a - pp) / pb;
                if (xi - unit).abs() > broaden {
                    return 0.0;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, &y) in grid_y.iter().enumerate() {
                    acc += chirped[i] * saft_kernel(y, w / a, params);
                }
                acc.norm_sqr()
            })
            .collect()
    });

    let mut cw = vec![0.0; w_probes.len()];
    let mut tail = vec![0.0; w_probes.len()];
    for (j, row) in per_scale.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            cw[i] += aw[j] * v;
            if scale_axis[j] >= a_min_decade {
                tail[i] += aw[j] * v;
            }
        }
    }
    let c_psi = cw.iter().sum::<f64>() / cw.len() as f64;
    if !(c_psi > 1e-12) || !c_psi.is_finite() {
        return Err(Error::NotAdmissible(format!("scale integral = {c_psi}")));
    }
    let (mn, mx) = cw.iter().fold((f64::MAX, 0.0f64), |(mn, mx), &v| (mn.min(v), mx.max(v)));
    let tail_share = tail.iter().sum::<f64>() / cw.len() as f64 / c_psi;
    Ok(AdmissibilityReport {
        c_psi,
        per_frequency_values: w_probes.iter().copied().zip(cw).collect(),
        max_relative_spread: (mx - mn) / c_psi,
        truncation_warning: tail_share > 0.01,
    })
}

/// The modulated window inside the admissibility integral and the
/// frequency-domain window `H`. With `unit_modulation` the linear phase
/// carries the extra `+y` of the admissibility form (the frequency-shifted
/// variant); without it, the row-spectrum factorization form.
fn chirped_window_value(
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    y: f64,
    unit_modulation: bool,
) -> Complex64 {
    let (pa, pb, pp) = (params.a_coef, params.b_coef, params.p_off);
    let unit = if unit_modulation { 1.0 } else { 0.0 };
    let phase = y * (unit - (1.0 - 1.0 / a) * pp / pb)
        - pa * y * y * (1.0 + 1.0 / (a * a)) / (2.0 * pb);
    window.eval(y) * Complex64::from_polar(1.0, phase)
}

fn window_quadrature_grid(
    window: &WindowSpec,
    params: &SaftParams,
    scale_axis: &[f64],
    w_probes: &[f64],
) -> (Vec<f64>, f64) {
    let h = window.support_halfwidth().max(1e-6);
    let a_min = scale_axis.first().copied().unwrap_or(1.0);
    let w_max = w_probes.iter().fold(0.0f64, |m, &w| m.max(w.abs()));
    let (pa, pb, pp) = (params.a_coef, params.b_coef, params.p_off);
    // bound on the instantaneous frequency of (chirped window) * kernel:
    // the window chirp -A y^2 (1 + 1/a^2)/(2B) cancels the kernel chirp
    // A y^2/(2B) up to a residual -A y^2/(2B a^2)
    let rate = 1.0
        + (pp / pb).abs() * (1.0 + 1.0 / a_min)
        + pa.abs() * h / (pb.abs() * a_min * a_min)
        + (pp.abs() + w_max / a_min) / pb.abs();
    let n = ((2.0 * h * rate / PI) * 6.0).ceil() as usize;
    let n = n.clamp(2048, 1 << 17);
    window.quadrature_grid(n)
}

/// Inverse SAST
/// `f(t) = (sqrt(2 pi)/C_psi) ∬ [SAST f](a,b) Psi_{N,a,b}(t) da db`
/// with trapezoid weights on the scale axis.
pub fn sast_inverse(
    grid: &TfrGrid,
    window: &WindowSpec,
    c_psi: f64,
    t_axis: UniformAxis,
) -> Result<SampledSignal> {
    if !(c_psi > 1e-12) {
        return Err(Error::NotAdmissible(format!("c_psi = {c_psi}")));
    }
    let tag = grid.provenance.transform_tag;
    if !matches!(
        tag,
        TransformTag::Sast | TransformTag::Lcst | TransformTag::Frst | TransformTag::Fresnel
    ) {
        return Err(Error::ProvenanceError(format!("expected a SAST-family grid, found {tag:?}")));
    }
    if grid.provenance.window != *window {
        return Err(Error::ProvenanceError("window differs from grid provenance".into()));
    }
    let params = grid.provenance.params;
    let acc = stockwell::synthesis_sum(grid, window, Some(&params), &t_axis);
    let scale = (2.0 * PI).sqrt() / c_psi;
    let samples: Vec<Complex64> = acc.iter().map(|&z| z * scale).collect();
    SampledSignal::new(samples, t_axis.start, t_axis.step)
}

/// Center/radius/Q of a window, as measured on a concrete grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowGeometry {
    pub center: f64,
    pub radius: f64,
    /// `radius/center`; `None` when the center is numerically zero.
    pub q_factor: Option<f64>,
}

fn geometry_from_density(xs: &[f64], density: &[f64], step: f64) -> Result<WindowGeometry> {
    let w = quad::trapezoid_weights(xs.len(), step);
    let m0: f64 = density.iter().zip(&w).map(|(d, wi)| d * wi).sum();
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::InvalidWindow("zero-energy window".into()));
    }
    let m1: f64 = xs.iter().zip(density).zip(&w).map(|((x, d), wi)| x * d * wi).sum();
    let center = m1 / m0;
    let m2: f64 = xs
        .iter()
        .zip(density)
        .zip(&w)
        .map(|((x, d), wi)| (x - center) * (x - center) * d * wi)
        .sum();
    let radius = (m2 / m0).sqrt();
    let q_factor =
        (center.abs() > 1e-9 * radius.max(1e-300)).then(|| radius / center);
    Ok(WindowGeometry { center, radius, q_factor })
}

/// Time-domain geometry of the analyzing atom `Psi_{N,a,b}`: numeric moments
/// of `|Psi_{N,a,b}(t)|^2`. Matches `center = b + E_psi/a`, `radius =
/// Delta_psi/a`; independent of the parameter matrix since the chirp has
/// unit modulus.
pub fn window_geometry_time(
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    b: f64,
) -> Result<WindowGeometry> {
    if !(a > 0.0) {
        return Err(Error::InvalidScale(a));
    }
    let (ys, step_y) = window.quadrature_grid(8192);
    let atom = AnalyzingAtom::affine(a, b, *params);
    let ts: Vec<f64> = ys.iter().map(|y| b + y / a).collect();
    let vals = stockwell::atom_evaluate(&atom, window, &ts)?;
    let density: Vec<f64> = vals.iter().map(|z| z.norm_sqr()).collect();
    geometry_from_density(&ts, &density, step_y / a)
}

/// Which scale the chirp inside the frequency-domain window `H` uses.
/// `Frozen` pins it (treating `H` as one fixed function of `w`, for which
/// the constant-Q statement is exact); `Live` uses the geometric scale
/// itself, exposing the residual scale dependence of the modulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChirpScale {
    Live,
    Frozen(f64),
}

/// Frequency-domain geometry: moments of `|H(w/a)|^2` where
/// `H(w) = S_N[chirped Psi](w)`. The returned center and radius scale
/// linearly in `a`, so `q_factor` depends only on `H` itself.
pub fn window_geometry_freq(
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    chirp: ChirpScale,
) -> Result<WindowGeometry> {
    if !(a > 0.0) {
        return Err(Error::InvalidScale(a));
    }
    let a_chirp = match chirp {
        ChirpScale::Live => a,
        ChirpScale::Frozen(a0) => a0,
    };
    // search region for the support of |H|^2, also the kernel-rate bound
    let b_abs = params.b_coef.abs();
    let wide = 40.0 * b_abs.max(1.0) * (1.0 + params.a_coef.abs()) + 10.0 * params.p_off.abs();
    let (ys, step_y) = window_quadrature_grid(window, params, &[a_chirp.min(1.0)], &[wide]);
    let wt = quad::trapezoid_weights(ys.len(), step_y);
    let chirped: Vec<Complex64> = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| chirped_window_value(window, params, a_chirp, y, true) * wt[i])
        .collect();
    let eval_h = |w: f64| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &y) in ys.iter().enumerate() {
            acc += chirped[i] * saft_kernel(y, w, params);
        }
        acc.norm_sqr()
    };
    // locate the support of |H|^2 with a coarse pass, then refine
    let coarse_n = 1024;
    let coarse_step = 2.0 * wide / (coarse_n - 1) as f64;
    let coarse: Vec<f64> = (0..coarse_n)
        .map(|i| eval_h(-wide + coarse_step * i as f64))
        .collect();
    let total: f64 = coarse.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidWindow("frequency window has no energy".into()));
    }
    let mut cum = 0.0;
    let mut lo = -wide;
    let mut hi = wide;
    for (i, &v) in coarse.iter().enumerate() {
        cum += v;
        if cum / total < 1e-5 {
            lo = -wide + coarse_step * i as f64;
        }
        if cum / total <= 1.0 - 1e-5 {
            hi = -wide + coarse_step * i as f64;
        }
    }
    let pad = 0.2 * (hi - lo).max(coarse_step);
    let (lo, hi) = (lo - pad, hi + pad);
    let n = 4096;
    let step = (hi - lo) / (n - 1) as f64;
    let wtilde: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let density: Vec<f64> = wtilde.iter().map(|&w| eval_h(w)).collect();
    // moments of |H(w/a)|^2: exact change of variables from the wtilde grid
    let scaled: Vec<f64> = wtilde.iter().map(|&w| a * w).collect();
    geometry_from_density(&scaled, &density, step * a)
}

/// Joint time-frequency support area `4 * Delta_H * Delta_psi`.
pub fn joint_spread(window: &WindowSpec, params: &SaftParams, a: f64, chirp: ChirpScale) -> Result<f64> {
    let tg = window_geometry_time(window, params, a, 0.0)?;
    let fg = window_geometry_freq(window, params, a, chirp)?;
    // radii of the unscaled windows: undo the 1/a and a factors
    Ok(4.0 * (fg.radius / a) * (tg.radius * a))
}

/// Range-theorem check: a genuine SAST grid must satisfy
/// `F(c,d) = C_psi^{-1} ∬ F(a,b) <Psi_{N,a,b}, Psi_{N,c,d}> da db` at every
/// node. Returns `max |lhs - rhs| / max |F|` over the probes (snapped to the
/// nearest grid node); noise grids violate it by a wide margin.
pub fn reproducing_kernel_check(
    grid: &TfrGrid,
    window: &WindowSpec,
    params: &SaftParams,
    c_psi: f64,
    probe_points: &[(f64, f64)],
    t_axis: UniformAxis,
) -> Result<f64> {
    if !(c_psi > 1e-12) {
        return Err(Error::NotAdmissible(format!("c_psi = {c_psi}")));
    }
    let max_abs = grid.max_abs();
    if max_abs == 0.0 {
        return Ok(0.0);
    }
    let ts = t_axis.values();
    let scales = grid.scales();
    let bs = grid.translations();
    let aw = grid.scale_weights();
    let db = grid.translation_step();
    let devs: Vec<f64> = probe_points
        .iter()
        .map(|&(c, d)| {
            let jc = nearest_index(scales, c);
            let kd = nearest_index(bs, d);
            let probe_atom = AnalyzingAtom::affine(scales[jc], bs[kd], *params);
            let probe_vals = stockwell::atom_evaluate(&probe_atom, window, &ts).unwrap();
            // rhs = (1/C) sum_j w_j sum_k db G[j,k] <atom_jk, atom_probe>
            let per_scale: Vec<Complex64> = par::map_indexed(scales.len(), |j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &bv) in bs.iter().enumerate() {
                    let atom = AnalyzingAtom::affine(scales[j], bv, *params);
                    let vals = stockwell::atom_evaluate(&atom, window, &ts).unwrap();
                    let inner = quad::weighted_inner(&vals, &probe_vals, t_axis.step);
                    acc += grid.at(j, k) * inner * db;
                }
                acc * aw[j]
            });
            let rhs: Complex64 = per_scale.iter().sum::<Complex64>() / c_psi;
            let lhs = grid.at(jc, kd);
            (lhs - rhs).norm()
        })
        .collect();
    Ok(devs.into_iter().fold(0.0, f64::max) / max_abs)
}

fn nearest_index(xs: &[f64], v: f64) -> usize {
    (0..xs.len())
        .min_by(|&i, &j| (xs[i] - v).abs().total_cmp(&(xs[j] - v).abs()))
        .unwrap_or(0)
}

/// Default analysis axis: 128 log-spaced scales over `[2 pi / T, pi / dt]`.
pub fn default_scale_axis(f: &SampledSignal) -> Result<Vec<f64>> {
    let t = f.duration().max(f.dt());
    axis::log_axis(2.0 * PI / t, PI / f.dt(), 128)
}

/// `|S_N[SAST slice at scale a](w)|` factorization (the spectral shape of a
/// row): equals `(1/sqrt(2 pi)) |S_N[f](w + aB)| |S_N[chirped Psi](w/a)|`
/// with the admissibility chirp at this scale. Exposed for tests.
pub fn row_spectrum_factors(
    f: &SampledSignal,
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    w: f64,
) -> (f64, f64) {
    let w_axis = UniformAxis { start: w + a * params.b_coef, step: 1.0, count: 1 };
    let sf = crate::saft::saft_forward(f, params, w_axis, crate::saft::Path::Direct).unwrap();
    let (ys, step_y) = window_quadrature_grid(window, params, &[a.abs().min(1.0)], &[w]);
    let wt = quad::trapezoid_weights(ys.len(), step_y);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        acc += chirped_window_value(window, params, a, y, false) * wt[i] * saft_kernel(y, w / a, params);
    }
    (sf.values[0].norm(), acc.norm())
}

/// Frequency-domain synthesis of the SAST (the alternate evaluation path
/// through the SAFT spectrum):
/// `[SAST f](a,b) = (e^{-iab} e^{iDp^2/(2B)} K_B / (sqrt(2 pi) K_B*)) ∫
///     e^{-i/(2B)(2(w/a)(Dp-Bq) - D(w^2/a^2 + p^2))} S_N[f](w)
///     conj(S_N[chirped Psi](w/a)) conj(K_N(b,w)) dw`,
/// obtained by expanding `S_N[Psi_{N,a,b}]` term by term (the constant
/// differs from naive bookkeeping by a unit phase when `p != 0`; the direct
/// path is the arbiter). Used only as a test oracle.
pub fn sast_from_spectrum(
    spectrum: &SaftSpectrum,
    window: &WindowSpec,
    params: &SaftParams,
    a: f64,
    b: f64,
) -> Complex64 {
    let (pb, pd, pp, pq) = (params.b_coef, params.d_coef, params.p_off, params.q_off);
    let (ys, step_y) = window_quadrature_grid(
        window,
        params,
        &[a.abs().min(1.0)],
        &[spectrum.axis.start.abs().max(spectrum.axis.end().abs())],
    );
    let wt = quad::trapezoid_weights(ys.len(), step_y);
    let chirped: Vec<Complex64> = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| chirped_window_value(window, params, a, y, true) * wt[i])
        .collect();
    let freqs = spectrum.frequencies();
    let ww = quad::trapezoid_weights(freqs.len(), spectrum.axis.step);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &w) in freqs.iter().enumerate() {
        let mut h = Complex64::new(0.0, 0.0);
        for (i, &y) in ys.iter().enumerate() {
            h += chirped[i] * saft_kernel(y, w / a, params);
        }
        let phase = -(2.0 * (w / a) * (pd * pp - pb * pq) - pd * (w * w / (a * a) + pp * pp))
            / (2.0 * pb);
        acc += Complex64::from_polar(ww[j], phase)
            * spectrum.values[j]
            * h.conj()
            * saft_kernel(b, w, params).conj();
    }
    let kb = params.k_b();
    Complex64::from_polar(1.0, -a * b + pd * pp * pp / (2.0 * pb)) * kb
        / ((2.0 * PI).sqrt() * kb.conj())
        * acc
}
