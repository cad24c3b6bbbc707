//! Classical Stockwell transform and the analyzing-atom algebra.
//!
//! The atom family is `Psi_{a,b} = M_a T_b D_a Psi` built from the dilation
//! `(D_a Psi)(t) = |a| Psi(a t)`, modulation `(M_a Psi)(t) = e^{iat} Psi(t)`
//! and translation `(T_b Psi)(t) = Psi(t - b)` operators. The affine variant
//! adds the parameter-matrix chirp and `conj(K_B)` normalizer.

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::grid::{Provenance, TfrGrid, TransformTag};
use crate::par;
use crate::params::SaftParams;
use crate::quad;
use crate::signal::SampledSignal;
use crate::window::WindowSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which analyzing family an atom belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomVariant {
    /// `Psi_{a,b}(t) = |a| e^{iat} Psi(a(t-b))`
    Classical,
    /// `Psi_{N,a,b}(t) = |a| conj(K_B) Psi(a(t-b)) e^{i(at + (2At(b-t) - Dp^2)/(2B))}`
    Affine(SaftParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzingAtom {
    pub scale: f64,
    pub translation: f64,
    pub variant: AtomVariant,
}

impl AnalyzingAtom {
    pub fn classical(scale: f64, translation: f64) -> Self {
        Self { scale, translation, variant: AtomVariant::Classical }
    }

    pub fn affine(scale: f64, translation: f64, params: SaftParams) -> Self {
        Self { scale, translation, variant: AtomVariant::Affine(params) }
    }
}

/// Evaluate the atom pointwise on the given time points.
pub fn atom_evaluate(
    atom: &AnalyzingAtom,
    window: &WindowSpec,
    t_points: &[f64],
) -> Result<Vec<Complex64>> {
    if !(atom.scale > 0.0) {
        return Err(Error::InvalidScale(atom.scale));
    }
    Ok(t_points
        .iter()
        .map(|&t| atom_value(atom, window, t))
        .collect())
}

pub(crate) fn atom_value(atom: &AnalyzingAtom, window: &WindowSpec, t: f64) -> Complex64 {
    let (a, b) = (atom.scale, atom.translation);
    let w = window.eval(a * (t - b));
    match &atom.variant {
        AtomVariant::Classical => a.abs() * Complex64::from_polar(1.0, a * t) * w,
        AtomVariant::Affine(p) => {
            let phase = a * t
                + (2.0 * p.a_coef * t * (b - t) - p.d_coef * p.p_off * p.p_off)
                    / (2.0 * p.b_coef);
            a.abs() * p.k_b().conj() * w * Complex64::from_polar(1.0, phase)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Direct,
    Fast,
}

/// Classical Stockwell transform
/// `[S f](a,b) = (1/sqrt(2 pi)) ∫ f(t) a e^{-iat} conj(Psi(a(t-b))) dt`
/// over positive scales and a uniform translation axis.
///
/// The fast path computes each scale row as the Fourier convolution
/// `(M_{-a} f) * (D_a Psi~)` with `Psi~(t) = conj(Psi)(-t)`, which requires
/// the translation axis to sit on the sample lattice.
pub fn st_forward(
    f: &SampledSignal,
    window: &WindowSpec,
    scales: &[f64],
    b_axis: UniformAxis,
    path: Path,
) -> Result<TfrGrid> {
    validate_scales(scales)?;
    let rows = match path {
        Path::Direct => rows_direct(f, window, scales, &b_axis, None),
        Path::Fast => rows_fast(f, window, scales, &b_axis, None)?,
    };
    TfrGrid::new(
        scales.to_vec(),
        b_axis.values(),
        rows,
        Provenance {
            params: SaftParams::classical(),
            window: window.clone(),
            transform_tag: TransformTag::St,
        },
    )
}

/// Single-point classical ST value (signed scale permitted).
pub fn st_point(f: &SampledSignal, window: &WindowSpec, a: f64, b: f64) -> Complex64 {
    let dt = f.dt();
    let weights = quad::trapezoid_weights(f.len(), dt);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &z) in f.samples().iter().enumerate() {
        let t = f.t0() + dt * i as f64;
        acc += z
            * window.eval(a * (t - b)).conj()
            * Complex64::from_polar(weights[i], -a * t);
    }
    acc * a / (2.0 * PI).sqrt()
}

/// Inversion `f(t) = (1/(sqrt(2 pi) C_psi)) ∬ [S f](a,b) Psi_{a,b}(t) da db`
/// evaluated on `t_axis`, with trapezoid weights on the (possibly
/// log-spaced) scale axis. `c_psi` is the orthogonality constant measured
/// by the admissibility integral at the Fourier matrix; the `1/sqrt(2 pi)`
/// keeps the synthesis consistent with `<S f, S g> = C_psi <f, g>` (round
/// trips confirm the normalization).
pub fn st_inverse(grid: &TfrGrid, window: &WindowSpec, c_psi: f64, t_axis: UniformAxis) -> Result<SampledSignal> {
    if !(c_psi > 1e-12) {
        return Err(Error::NotAdmissible(format!("c_psi = {c_psi}")));
    }
    if grid.provenance.transform_tag != TransformTag::St {
        return Err(Error::ProvenanceError(format!(
            "expected an ST grid, found {:?}",
            grid.provenance.transform_tag
        )));
    }
    if grid.provenance.window != *window {
        return Err(Error::ProvenanceError("window differs from grid provenance".into()));
    }
    let acc = synthesis_sum(grid, window, None, &t_axis);
    let scale = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * c_psi);
    let samples: Vec<Complex64> = acc.iter().map(|&z| z * scale).collect();
    SampledSignal::new(samples, t_axis.start, t_axis.step)
}

pub(crate) fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidInput("scale axis is empty".into()));
    }
    if let Some(&bad) = scales.iter().find(|&&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidScale(bad));
    }
    if scales.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidInput("scales must be strictly increasing".into()));
    }
    Ok(())
}

/// Shared direct evaluator. With `affine = Some(params)` this computes the
/// SAST integrand of the affine family; with `None` the classical ST.
pub(crate) fn rows_direct(
    f: &SampledSignal,
    window: &WindowSpec,
    scales: &[f64],
    b_axis: &UniformAxis,
    affine: Option<&SaftParams>,
) -> Vec<Complex64> {
    let m = b_axis.count;
    let rows: Vec<Vec<Complex64>> = par::map_indexed(scales.len(), |j| {
        let a = scales[j];
        (0..m)
            .map(|k| point_value(f, window, a, b_axis.value(k), affine))
            .collect()
    });
    rows.into_iter().flatten().collect()
}

/// Direct single-point evaluator shared by ST and SAST; `a` may be signed.
pub(crate) fn point_value(
    f: &SampledSignal,
    window: &WindowSpec,
    a: f64,
    b: f64,
    affine: Option<&SaftParams>,
) -> Complex64 {
    match affine {
        None => st_point(f, window, a, b),
        Some(p) => {
            let dt = f.dt();
            let weights = quad::trapezoid_weights(f.len(), dt);
            let (pa, pb, pd, pp) = (p.a_coef, p.b_coef, p.d_coef, p.p_off);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &z) in f.samples().iter().enumerate() {
                let t = f.t0() + dt * i as f64;
                let phase = -a * t - (2.0 * pa * t * (b - t) - pd * pp * pp) / (2.0 * pb);
                acc += z * window.eval(a * (t - b)).conj() * Complex64::from_polar(weights[i], phase);
            }
            acc * p.k_b() * a.abs() / (2.0 * PI).sqrt()
        }
    }
}

/// Shared per-scale FFT convolution path. The integrand factors as
/// `x(t) * H(b - t)` after splitting the affine chirp across `t`, `b` and
/// `(b - t)`; the translation axis must sit on the sample lattice
/// (`db = r*dt`, offset an integer multiple of `dt`).
pub(crate) fn rows_fast(
    f: &SampledSignal,
    window: &WindowSpec,
    scales: &[f64],
    b_axis: &UniformAxis,
    affine: Option<&SaftParams>,
) -> Result<Vec<Complex64>> {
    let dt = f.dt();
    let n = f.len();
    let m = b_axis.count;
    let r = lattice_ratio(b_axis.step, dt).ok_or_else(|| {
        Error::InvalidInput(format!(
            "fast path needs db = r*dt for integer r; db = {}, dt = {dt}",
            b_axis.step
        ))
    })?;
    let rho = lattice_offset(b_axis.start, f.t0(), dt).ok_or_else(|| {
        Error::InvalidInput("fast path needs the translation axis aligned to the sample grid".into())
    })?;
    let weights = quad::trapezoid_weights(n, dt);
    // chirp rate alpha = A/(2B); zero for the classical transform
    let (alpha, kpre) = match affine {
        Some(p) => (
            p.a_coef / (2.0 * p.b_coef),
            p.k_b()
                * Complex64::from_polar(
                    1.0,
                    p.d_coef * p.p_off * p.p_off / (2.0 * p.b_coef),
                )
                / (2.0 * PI).sqrt(),
        ),
        None => (0.0, Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0)),
    };
    let jmin = rho - (n as i64 - 1);
    let jmax = rho + (m as i64 - 1) * r;
    let lh = (jmax - jmin + 1) as usize;

    let rows: Vec<Vec<Complex64>> = par::map_indexed(scales.len(), |ji| {
        let a = scales[ji];
        let x: Vec<Complex64> = f
            .samples()
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let t = f.t0() + dt * i as f64;
                z * Complex64::from_polar(weights[i], alpha * t * t - a * t)
            })
            .collect();
        let h: Vec<Complex64> = (0..lh)
            .map(|i| {
                let v = dt * (jmin + i as i64) as f64;
                window.eval(-a * v).conj() * Complex64::from_polar(1.0, alpha * v * v)
            })
            .collect();
        let conv = crate::fft::linear_convolve(&x, &h);
        (0..m)
            .map(|k| {
                let b = b_axis.value(k);
                let s = (n - 1) + k * r as usize;
                let post = Complex64::from_polar(a.abs(), -alpha * b * b);
                kpre * post * conv[s]
            })
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Synthesis `sum_j w_a(j) sum_k G[j,k] db Atom_{a_j, b_k}(t)` shared by the
/// ST and SAST inverses (the caller divides by its constant). Uses the same
/// chirp-splitting convolution when `t_axis` sits on the grid lattice,
/// falling back to direct atom summation otherwise.
pub(crate) fn synthesis_sum(
    grid: &TfrGrid,
    window: &WindowSpec,
    affine: Option<&SaftParams>,
    t_axis: &UniformAxis,
) -> Vec<Complex64> {
    let db = grid.translation_step();
    let dt = t_axis.step;
    let bs = grid.translations();
    let aligned = lattice_ratio(db, dt)
        .and_then(|r| lattice_offset(t_axis.start, bs[0], dt).map(|s| (r, s)));
    let aw = grid.scale_weights();
    let nt = t_axis.count;
    let m = bs.len();

    let contribs: Vec<Vec<Complex64>> = par::map_indexed(grid.n_scales(), |j| {
        let a = grid.scales()[j];
        let (alpha, cpre) = match affine {
            Some(p) => (
                p.a_coef / (2.0 * p.b_coef),
                p.k_b().conj()
                    * Complex64::from_polar(
                        1.0,
                        -p.d_coef * p.p_off * p.p_off / (2.0 * p.b_coef),
                    ),
            ),
            None => (0.0, Complex64::new(1.0, 0.0)),
        };
        let row = grid.row(j);
        match aligned {
            Some((r, sigma)) => {
                // y_k = G[j,k] db e^{i alpha b^2}, placed on the dt lattice
                let ylen = (m - 1) * r as usize + 1;
                let mut y = vec![Complex64::new(0.0, 0.0); ylen];
                for (k, &c) in row.iter().enumerate() {
                    let b = bs[k];
                    y[k * r as usize] = c * Complex64::from_polar(db, alpha * b * b);
                }
                let jmin = sigma - (m as i64 - 1) * r;
                let jmax = sigma + (nt as i64 - 1);
                let lh = (jmax - jmin + 1) as usize;
                let x: Vec<Complex64> = (0..lh)
                    .map(|i| {
                        let u = dt * (jmin + i as i64) as f64;
                        window.eval(a * u) * Complex64::from_polar(1.0, -alpha * u * u)
                    })
                    .collect();
                let conv = crate::fft::linear_convolve(&y, &x);
                (0..nt)
                    .map(|i| {
                        let t = t_axis.value(i);
                        let s = (m - 1) * r as usize + i;
                        let outer = Complex64::from_polar(a.abs() * aw[j], a * t - alpha * t * t);
                        cpre * outer * conv[s]
                    })
                    .collect()
            }
            None => (0..nt)
                .map(|i| {
                    let t = t_axis.value(i);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, &c) in row.iter().enumerate() {
                        let atom = match affine {
                            Some(p) => AnalyzingAtom::affine(a, bs[k], *p),
                            None => AnalyzingAtom::classical(a, bs[k]),
                        };
                        acc += c * atom_value(&atom, window, t) * db;
                    }
                    acc * aw[j]
                })
                .collect(),
        }
    });
    let mut out = vec![Complex64::new(0.0, 0.0); nt];
    for c in contribs {
        for (o, v) in out.iter_mut().zip(c) {
            *o += v;
        }
    }
    out
}

fn lattice_ratio(db: f64, dt: f64) -> Option<i64> {
    let r = db / dt;
    let rr = r.round();
    if rr >= 1.0 && (r - rr).abs() < 1e-9 * rr.max(1.0) {
        Some(rr as i64)
    } else {
        None
    }
}

fn lattice_offset(x0: f64, y0: f64, dt: f64) -> Option<i64> {
    let s = (x0 - y0) / dt;
    let sr = s.round();
    if (s - sr).abs() < 1e-6 {
        Some(sr as i64)
    } else {
        None
    }
}
