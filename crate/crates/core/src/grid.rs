//! Time-frequency coefficient grids with provenance.

use crate::error::{Error, Result};
use crate::params::SaftParams;
use crate::window::WindowSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which transform produced a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TransformTag {
    St,
    Sast,
    Lcst,
    Frst,
    Fresnel,
    Saswd,
    Stft,
}

/// What a grid was computed from; needed to invert it meaningfully.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: SaftParams,
    pub window: WindowSpec,
    pub transform_tag: TransformTag,
}

/// Complex coefficients over (scale a > 0, uniform translation b).
/// Rows are scales, columns translations. For SASWD grids the `(t, u)`
/// plane is stored with `u` on the scale axis and `t` on the translations.
#[derive(Debug, Clone, PartialEq)]
pub struct TfrGrid {
    scales: Vec<f64>,
    translations: Vec<f64>,
    coeffs: Vec<Complex64>,
    pub provenance: Provenance,
}

impl TfrGrid {
    pub fn new(
        scales: Vec<f64>,
        translations: Vec<f64>,
        coeffs: Vec<Complex64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if coeffs.len() != scales.len() * translations.len() {
            return Err(Error::InvalidInput(format!(
                "coefficient count {} does not match {} scales x {} translations",
                coeffs.len(),
                scales.len(),
                translations.len()
            )));
        }
        if scales.is_empty() || translations.is_empty() {
            return Err(Error::InvalidInput("grid axes must be nonempty".into()));
        }
        if provenance.transform_tag != TransformTag::Saswd {
            if let Some(&bad) = scales.iter().find(|&&a| !(a > 0.0)) {
                return Err(Error::InvalidScale(bad));
            }
            if scales.windows(2).any(|p| p[1] <= p[0]) {
                return Err(Error::InvalidInput("scales must be strictly increasing".into()));
            }
        }
        if translations.len() >= 2 {
            let db = translations[1] - translations[0];
            if !(db > 0.0) || !crate::axis::is_uniform(&translations, db) {
                return Err(Error::InvalidInput("translations must be uniform and increasing".into()));
            }
        }
        Ok(Self { scales, translations, coeffs, provenance })
    }

    pub fn n_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn n_translations(&self) -> usize {
        self.translations.len()
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn translations(&self) -> &[f64] {
        &self.translations
    }

    pub fn translation_step(&self) -> f64 {
        if self.translations.len() >= 2 {
            self.translations[1] - self.translations[0]
        } else {
            1.0
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn at(&self, scale_idx: usize, trans_idx: usize) -> Complex64 {
        self.coeffs[scale_idx * self.translations.len() + trans_idx]
    }

    pub fn row(&self, scale_idx: usize) -> &[Complex64] {
        let m = self.translations.len();
        &self.coeffs[scale_idx * m..(scale_idx + 1) * m]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Pointwise multiply by real weights of identical shape.
    pub fn apply_mask(&self, mask: &[f64]) -> Result<Self> {
        if mask.len() != self.coeffs.len() {
            return Err(Error::GridMismatch(format!(
                "mask has {} entries, grid has {}",
                mask.len(),
                self.coeffs.len()
            )));
        }
        if mask.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::InvalidInput("mask entries must lie in [0, 1]".into()));
        }
        let coeffs = self.coeffs.iter().zip(mask).map(|(&c, &w)| c * w).collect();
        Self::new(
            self.scales.clone(),
            self.translations.clone(),
            coeffs,
            self.provenance.clone(),
        )
    }

    /// Trapezoid weights of the (possibly log-spaced) scale axis.
    pub fn scale_weights(&self) -> Vec<f64> {
        crate::axis::trapezoid_axis_weights(&self.scales)
    }

    /// `∬ |coef|^2 da db` over the grid measure.
    pub fn energy(&self) -> f64 {
        let aw = self.scale_weights();
        let db = self.translation_step();
        let m = self.translations.len();
        let mut total = 0.0;
        for (j, wa) in aw.iter().enumerate() {
            let row_sum: f64 = self.coeffs[j * m..(j + 1) * m].iter().map(|z| z.norm_sqr()).sum();
            total += wa * db * row_sum;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance {
            params: SaftParams::classical(),
            window: WindowSpec::GaussianPi,
            transform_tag: TransformTag::Sast,
        }
    }

    #[test]
    fn shape_and_axis_validation() {
        let bad = TfrGrid::new(vec![1.0, 2.0], vec![0.0, 0.1], vec![Complex64::new(0.0, 0.0); 3], prov());
        assert!(bad.is_err());
        let neg = TfrGrid::new(vec![-1.0, 2.0], vec![0.0, 0.1], vec![Complex64::new(0.0, 0.0); 4], prov());
        assert!(matches!(neg, Err(Error::InvalidScale(_))));
        let nonuni = TfrGrid::new(
            vec![1.0, 2.0],
            vec![0.0, 0.1, 0.3],
            vec![Complex64::new(0.0, 0.0); 6],
            prov(),
        );
        assert!(nonuni.is_err());
    }

    #[test]
    fn mask_validation() {
        let g = TfrGrid::new(
            vec![1.0, 2.0],
            vec![0.0, 0.1],
            vec![Complex64::new(1.0, 0.0); 4],
            prov(),
        )
        .unwrap();
        assert!(g.apply_mask(&[0.5; 3]).is_err());
        assert!(g.apply_mask(&[1.5, 0.0, 0.0, 0.0]).is_err());
        let m = g.apply_mask(&[0.0, 1.0, 0.5, 0.0]).unwrap();
        assert_eq!(m.at(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(m.at(1, 0), Complex64::new(0.5, 0.0));
    }
}
