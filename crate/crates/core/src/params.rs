//! The six-parameter matrix driving the special affine transforms.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const UNIMODULAR_TOL: f64 = 1e-9;

/// Augmented parameter matrix `(A, B, C, D; p, q)` with `B != 0`.
///
/// Unimodularity `A*D - B*C = 1` is enforced on construction unless the
/// caller opts out with [`SaftParams::new_non_unimodular`]; the opt-out
/// exists because useful demonstration matrices in the wild violate the
/// constraint, and the forward transforms only involve `A`, `B`, `D`, `p`,
/// `q` anyway.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaftParams {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    pub d_coef: f64,
    pub p_off: f64,
    pub q_off: f64,
    #[serde(default)]
    allow_non_unimodular: bool,
}

impl SaftParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64) -> Result<Self> {
        Self::build(a, b, c, d, p, q, false)
    }

    /// Construct without the unimodularity check. Logs a warning when the
    /// determinant is actually off so silent misuse stays visible.
    pub fn new_non_unimodular(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64) -> Result<Self> {
        let s = Self::build(a, b, c, d, p, q, true)?;
        if (a * d - b * c - 1.0).abs() > UNIMODULAR_TOL {
            log::warn!(
                "matrix ({a},{b},{c},{d};{p},{q}) has AD-BC = {} != 1; \
                 proceeding under the non-unimodular override",
                a * d - b * c
            );
        }
        Ok(s)
    }

    fn build(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64, allow: bool) -> Result<Self> {
        for (name, v) in [("A", a), ("B", b), ("C", c), ("D", d), ("p", p), ("q", q)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if b == 0.0 {
            return Err(Error::InvalidParams(
                "B = 0 degenerates the transform to a chirp multiplication; not supported".into(),
            ));
        }
        if !allow && (a * d - b * c - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidParams(format!(
                "AD - BC = {} violates unimodularity; use the explicit override if intended",
                a * d - b * c
            )));
        }
        Ok(Self {
            a_coef: a,
            b_coef: b,
            c_coef: c,
            d_coef: d,
            p_off: p,
            q_off: q,
            allow_non_unimodular: allow,
        })
    }

    /// Fourier-reduction matrix `(0, 1, -1, 0; 0, 0)`.
    pub fn classical() -> Self {
        Self::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0).expect("classical matrix is unimodular")
    }

    /// Kernel normalizer `K_B = 1/sqrt(i 2 pi B)`, principal branch.
    /// Satisfies `|K_B|^2 = 1/(2 pi |B|)` for either sign of `B`.
    pub fn k_b(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * PI * self.b_coef).sqrt().inv()
    }

    /// Matrix of the inverse transform: `(D, -B, -C, A; Bq - Dp, Cp - Aq)`.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d, p, q) = (
            self.a_coef,
            self.b_coef,
            self.c_coef,
            self.d_coef,
            self.p_off,
            self.q_off,
        );
        Self {
            a_coef: d,
            b_coef: -b,
            c_coef: -c,
            d_coef: a,
            p_off: b * q - d * p,
            q_off: c * p - a * q,
            allow_non_unimodular: self.allow_non_unimodular,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a_coef * self.d_coef - self.b_coef * self.c_coef
    }

    pub fn is_unimodular(&self) -> bool {
        (self.determinant() - 1.0).abs() <= UNIMODULAR_TOL
    }
}
