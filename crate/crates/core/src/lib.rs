//! Special affine Stockwell transform (SAST) toolkit.
//!
//! The SAST is a constant-Q time-frequency representation driven by the
//! six-parameter special affine Fourier transform (SAFT). This crate
//! provides:
//!
//! - the discrete SAFT (kernel, forward/inverse, special affine convolution),
//! - the classical Stockwell transform and its analyzing-atom algebra,
//! - the SAST itself (direct quadrature and a chirp/FFT/chirp fast path),
//!   its inverse, admissibility constants and window-geometry diagnostics,
//! - scaled Wigner distributions and uncertainty-bound verifiers,
//! - LFM chirp synthesis, ridge extraction, method comparison and an
//!   echo-filtering pipeline.
//!
//! All transforms are pure functions over immutable inputs. Per-scale work
//! is data-parallel (rayon) when the `parallel` feature is enabled (the
//! default); reductions are performed in deterministic index order so
//! results are bit-reproducible across thread counts.

pub mod analysis;
pub mod axis;
pub mod chirplab;
pub mod error;
pub mod fft;
pub mod grid;
pub mod io;
pub(crate) mod par;
pub mod params;
pub mod quad;
pub mod saft;
pub mod sast;
pub mod signal;
pub mod stockwell;
pub mod window;

pub use error::{Error, Result};
pub use grid::{TfrGrid, TransformTag};
pub use params::SaftParams;
pub use signal::SampledSignal;
pub use window::WindowSpec;

pub use num_complex::Complex64;
