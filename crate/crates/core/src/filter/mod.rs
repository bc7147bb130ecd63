//! Spatial-tonal filters on grayscale images.
//!
//! Each output pixel is a weighted mean of its `(2r+1)²` window,
//!
//! ```text
//! y = argmin_y Σᵢ sᵢ · g(|xᵢ − f(x)|) · D(xᵢ − y)
//! ```
//!
//! with spatial weights `sᵢ = exp(−dᵢ² / 2σ_s²)`, a tonal kernel `g`, a
//! center estimate `f` (the pixel itself gives the bilateral filter) and a
//! dissimilarity `D`. For `D(t) = t²` the minimiser is the closed-form
//! weighted mean. Because every weight depends on differences only and
//! every center estimate is shift-invariant, so is the filter.
//!
//! ```
//! use weakmean::filter::{FilterConfig, GrayImage, TonalFilter};
//!
//! let img = GrayImage::constant(8, 8, 0.4, 255).unwrap();
//! let out = TonalFilter::new(FilterConfig::default()).unwrap().filter_image(&img).unwrap();
//! assert_eq!(out, img);
//! ```

mod pgm;

pub use pgm::{read_pgm, write_pgm, GrayImage, PgmFormat};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means;
use crate::penalty::{self, minimize_penalty, MinimizerConfig, PenaltyClass, PenaltySpec};
use crate::robust;

/// Tonal kernel `g` applied to `|xᵢ − f(x)|`. An infinite `σ` gives
/// `g ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TonalKernel {
    /// `exp(−t² / 2σ²)`
    Gaussian(f64),
    /// `1 / (1 + (t/σ)²)`
    Cauchy(f64),
}

impl TonalKernel {
    pub fn sigma(self) -> f64 {
        match self {
            TonalKernel::Gaussian(s) | TonalKernel::Cauchy(s) => s,
        }
    }

    /// `ln g(t)`; the filter works with logarithms so that very narrow
    /// kernels cannot underflow every weight to zero.
    pub fn ln_eval(self, t: f64) -> f64 {
        let s = self.sigma();
        match self {
            TonalKernel::Gaussian(_) => -0.5 * (t / s) * (t / s),
            TonalKernel::Cauchy(_) => -((t / s) * (t / s)).ln_1p(),
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        self.ln_eval(t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterEstimator {
    /// The pixel being filtered (bilateral filter).
    CenterPixel,
    Median,
    Shorth,
    /// Mode of the quantised window, see [`FilterConfig::mode_epsilon`].
    Mode,
}

impl FromStr for CenterEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "center" | "center-pixel" | "pixel" => CenterEstimator::CenterPixel,
            "median" => CenterEstimator::Median,
            "shorth" => CenterEstimator::Shorth,
            "mode" => CenterEstimator::Mode,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown estimator '{other}' (center, median, shorth, mode)"
                )))
            }
        })
    }
}

impl fmt::Display for CenterEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CenterEstimator::CenterPixel => "center",
            CenterEstimator::Median => "median",
            CenterEstimator::Shorth => "shorth",
            CenterEstimator::Mode => "mode",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dissimilarity {
    Squared,
    /// Huber function with threshold `δ`.
    Huber(f64),
}

impl Dissimilarity {
    pub const DEFAULT_HUBER_DELTA: f64 = 0.1;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Repeat the edge pixel.
    Clamp,
    /// Reflect about the edge pixel without repeating it.
    Mirror,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamp" => Ok(Boundary::Clamp),
            "mirror" | "reflect" => Ok(Boundary::Mirror),
            other => Err(Error::InvalidConfig(format!(
                "unknown boundary '{other}' (clamp, mirror)"
            ))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Clamp => "clamp",
            Boundary::Mirror => "mirror",
        })
    }
}

impl Boundary {
    fn index(self, i: isize, n: usize) -> usize {
        let n = n as isize;
        match self {
            Boundary::Clamp => i.clamp(0, n - 1) as usize,
            Boundary::Mirror if n == 1 => 0,
            Boundary::Mirror => {
                let period = 2 * (n - 1);
                let m = i.rem_euclid(period);
                (if m >= n { period - m } else { m }) as usize
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub radius: usize,
    pub spatial_sigma: f64,
    pub tonal_kernel: TonalKernel,
    pub center: CenterEstimator,
    pub dissimilarity: Dissimilarity,
    pub boundary: Boundary,
    /// Bin width for [`CenterEstimator::Mode`]; defaults to `1 / maxval`
    /// of the image being filtered.
    pub mode_epsilon: Option<f64>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            radius: 2,
            spatial_sigma: 1.5,
            tonal_kernel: TonalKernel::Gaussian(0.1),
            center: CenterEstimator::CenterPixel,
            dissimilarity: Dissimilarity::Squared,
            boundary: Boundary::Mirror,
            mode_epsilon: None,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && !v.is_nan() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{what} must be positive, got {v}")))
            }
        };
        positive(self.spatial_sigma, "spatial sigma")?;
        positive(self.tonal_kernel.sigma(), "tonal sigma")?;
        if let Dissimilarity::Huber(d) = self.dissimilarity {
            positive(d, "Huber delta")?;
            if d.is_infinite() {
                return Err(Error::InvalidConfig("Huber delta must be finite".into()));
            }
        }
        if let Some(e) = self.mode_epsilon {
            positive(e, "mode epsilon")?;
        }
        if self.radius > 64 {
            return Err(Error::InvalidConfig(format!("radius {} is too large", self.radius)));
        }
        Ok(())
    }
}

/// A filter with its spatial weights computed once.
#[derive(Debug, Clone)]
pub struct TonalFilter {
    cfg: FilterConfig,
    /// `ln sᵢ`, row-major over the window.
    ln_spatial: Vec<f64>,
}

impl TonalFilter {
    pub fn new(cfg: FilterConfig) -> Result<Self> {
        cfg.validate()?;
        let r = cfg.radius as isize;
        let s2 = cfg.spatial_sigma * cfg.spatial_sigma;
        let ln_spatial = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .map(|(dx, dy)| -((dx * dx + dy * dy) as f64) / (2.0 * s2))
            .collect();
        Ok(Self { cfg, ln_spatial })
    }

    pub fn config(&self) -> &FilterConfig {
        &self.cfg
    }

    pub fn window_len(&self) -> usize {
        self.ln_spatial.len()
    }

    /// Spatial weights `sᵢ` in window order.
    pub fn spatial_weights(&self) -> Vec<f64> {
        self.ln_spatial.iter().map(|l| l.exp()).collect()
    }

    fn center_value(&self, window: &[f64], center: f64, epsilon: f64) -> Result<f64> {
        match self.cfg.center {
            CenterEstimator::CenterPixel => Ok(center),
            CenterEstimator::Median => means::median(window),
            CenterEstimator::Shorth if window.len() < 2 => Ok(window[0]),
            CenterEstimator::Shorth => robust::shorth(window),
            CenterEstimator::Mode => robust::mode_quantized(window, epsilon),
        }
    }

    /// Combined weights `sᵢ g(|xᵢ − f|)`, scaled so the largest is 1.
    fn weights(&self, window: &[f64], center: f64, epsilon: f64) -> Result<Vec<f64>> {
        if window.len() != self.window_len() {
            return Err(Error::LengthMismatch {
                expected: self.window_len(),
                got: window.len(),
            });
        }
        let f = self.center_value(window, center, epsilon)?;
        let ln: Vec<f64> = window
            .iter()
            .zip(&self.ln_spatial)
            .map(|(&x, &s)| s + self.cfg.tonal_kernel.ln_eval(x - f))
            .collect();
        let top = ln.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ln.iter().map(|l| (l - top).exp()).collect())
    }

    fn epsilon_for(&self, maxval: u16) -> f64 {
        self.cfg.mode_epsilon.unwrap_or(1.0 / maxval as f64)
    }

    /// Filters one window, listed row-major, whose middle pixel is `center`.
    /// `maxval` only matters for the default mode bin width.
    pub fn filter_pixel(&self, window: &[f64], center: f64, maxval: u16) -> Result<f64> {
        let u = self.weights(window, center, self.epsilon_for(maxval))?;
        let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let y = match self.cfg.dissimilarity {
            Dissimilarity::Squared => {
                let (mut num, mut den) = (0.0, 0.0);
                for (&x, &w) in window.iter().zip(&u) {
                    num += w * x;
                    den += w;
                }
                num / den
            }
            Dissimilarity::Huber(delta) => {
                minimize_penalty(&weighted_penalty(u, Some(delta)), window, &MinimizerConfig::default())?
            }
        };
        Ok(y.clamp(lo, hi))
    }

    /// As [`TonalFilter::filter_pixel`] but always through the penalty
    /// minimiser, including for the squared dissimilarity.
    pub fn filter_pixel_by_penalty(&self, window: &[f64], center: f64, maxval: u16) -> Result<f64> {
        let u = self.weights(window, center, self.epsilon_for(maxval))?;
        let delta = match self.cfg.dissimilarity {
            Dissimilarity::Squared => None,
            Dissimilarity::Huber(d) => Some(d),
        };
        minimize_penalty(&weighted_penalty(u, delta), window, &MinimizerConfig::default())
    }

    /// The window around `(col, row)` under the boundary policy.
    pub fn window(&self, img: &GrayImage, col: usize, row: usize) -> Vec<f64> {
        let r = self.cfg.radius as isize;
        let mut out = Vec::with_capacity(self.window_len());
        for dy in -r..=r {
            let y = self.cfg.boundary.index(row as isize + dy, img.height());
            for dx in -r..=r {
                let x = self.cfg.boundary.index(col as isize + dx, img.width());
                out.push(img.get(x, y));
            }
        }
        out
    }

    /// Filters every pixel; rows are processed in parallel.
    pub fn filter_image(&self, img: &GrayImage) -> Result<GrayImage> {
        let (w, h) = (img.width(), img.height());
        let rows: Vec<Vec<f64>> = (0..h)
            .into_par_iter()
            .map(|row| {
                (0..w)
                    .map(|col| {
                        let win = self.window(img, col, row);
                        self.filter_pixel(&win, img.get(col, row), img.maxval())
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        GrayImage::new(w, h, rows.concat(), img.maxval())
    }
}

fn weighted_penalty(u: Vec<f64>, huber_delta: Option<f64>) -> PenaltySpec {
    match huber_delta {
        None => PenaltySpec::weighted_squares(u),
        Some(delta) => PenaltySpec::from_terms("weighted-huber", PenaltyClass::QuasiConvex, 0.0, move |x, y, i| {
            u[i] * penalty::huber(x - y, delta)
        }),
    }
}
