//! Thin FFT helpers over rustfft: transforms, zero-padded linear
//! convolution, and 2x band-limited (periodic sinc) upsampling.

use num_complex::Complex64;
use rustfft::FftPlanner;

pub fn fft_in_place(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

pub fn ifft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(buf);
    let s = 1.0 / n as f64;
    for z in buf.iter_mut() {
        *z *= s;
    }
}

fn next_fft_len(n: usize) -> usize {
    // rustfft handles arbitrary sizes; powers of two keep it predictable
    n.next_power_of_two()
}

/// Full linear convolution of `x` and `h` (length `x.len() + h.len() - 1`).
pub fn linear_convolve(x: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let out_len = x.len() + h.len() - 1;
    let l = next_fft_len(out_len);
    let mut fx = vec![Complex64::new(0.0, 0.0); l];
    let mut fh = vec![Complex64::new(0.0, 0.0); l];
    fx[..x.len()].copy_from_slice(x);
    fh[..h.len()].copy_from_slice(h);
    fft_in_place(&mut fx);
    fft_in_place(&mut fh);
    for (a, b) in fx.iter_mut().zip(&fh) {
        *a *= b;
    }
    ifft_in_place(&mut fx);
    fx.truncate(out_len);
    fx
}

/// 2x upsampling by spectral zero insertion (periodic sinc interpolation).
/// Output index `2k` reproduces input index `k`; odd indices are the
/// band-limited half-sample values.
pub fn upsample2(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let mut spec = x.to_vec();
    fft_in_place(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
    if n % 2 == 0 {
        let h = n / 2;
        out[..h].copy_from_slice(&spec[..h]);
        // split the Nyquist bin symmetrically
        out[h] = 0.5 * spec[h];
        out[2 * n - h] = 0.5 * spec[h];
        out[2 * n - h + 1..].copy_from_slice(&spec[h + 1..]);
    } else {
        let h = (n + 1) / 2; // nonnegative-frequency bins 0..h
        out[..h].copy_from_slice(&spec[..h]);
        out[2 * n - (n - h)..].copy_from_slice(&spec[h..]);
    }
    ifft_in_place(&mut out);
    for z in out.iter_mut() {
        *z *= 2.0;
    }
    out
}
