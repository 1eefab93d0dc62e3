//! Stationary Gaussian random fields by smoothing white noise.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::child_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrfConfig {
    /// `(rows, cols)` of the pixel grid.
    pub dims: (usize, usize),
    /// Full width at half maximum of the smoothing kernel, in pixels.
    pub fwhm: f64,
    pub n_fields: usize,
    pub seed: u64,
}

impl GrfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.0 == 0 || self.dims.1 == 0 {
            return Err(invalid("field dimensions must be positive"));
        }
        if !(self.fwhm >= 0.0 && self.fwhm.is_finite()) {
            return Err(invalid(format!("fwhm = {} must be a nonnegative number", self.fwhm)));
        }
        Ok(())
    }

    pub fn n_pixels(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn sigma(&self) -> f64 {
        fwhm_to_sigma(self.fwhm)
    }
}

/// `sigma = fwhm / (2 sqrt(2 ln 2))`.
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}

/// Unnormalized 1-D Gaussian weights on `-r..=r`, `r = ceil(4 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![1.0];
    }
    let r = (4.0 * sigma).ceil() as i64;
    (-r..=r).map(|x| (-((x * x) as f64) / (2.0 * sigma * sigma)).exp()).collect()
}

/// Lag-`d` correlation of continuously smoothed white noise,
/// `exp(-d^2 / (4 sigma^2))`.
pub fn theoretical_correlation(fwhm: f64, lag: f64) -> f64 {
    let s = fwhm_to_sigma(fwhm);
    if s == 0.0 {
        return if lag == 0.0 { 1.0 } else { 0.0 };
    }
    (-lag * lag / (4.0 * s * s)).exp()
}

/// Draws `n_fields` unit-variance fields as rows of an `n_fields x (rows*cols)`
/// matrix; pixel `(i, j)` sits in column `i * cols + j`.
///
/// White noise is drawn on the grid enlarged by the kernel radius on every
/// side, convolved separably and cropped, so every kept pixel sees the full
/// kernel. Dividing by the squared 1-D weight sum (the L2 norm of the 2-D
/// kernel) makes each pixel's variance exactly 1.
pub fn generate_grf(config: &GrfConfig) -> Result<DMatrix<f64>> {
    config.validate()?;
    let kernel = gaussian_kernel(config.sigma());
    let scale = kernel.iter().map(|g| g * g).sum::<f64>();
    let fields: Vec<Vec<f64>> = (0..config.n_fields)
        .into_par_iter()
        .map(|i| smooth_field(config.dims, &kernel, scale, config.seed, i))
        .collect();
    let n_pixels = config.n_pixels();
    Ok(DMatrix::from_fn(config.n_fields, n_pixels, |i, j| fields[i][j]))
}

fn smooth_field(dims: (usize, usize), kernel: &[f64], scale: f64, seed: u64, index: usize) -> Vec<f64> {
    let (rows, cols) = dims;
    let width = kernel.len();
    let (er, ec) = (rows + width - 1, cols + width - 1);
    let mut rng = child_rng(seed, index as u64);
    let noise: Vec<f64> = (0..er * ec).map(|_| StandardNormal.sample(&mut rng)).collect();

    // along columns, on every enlarged row
    let mut tmp = vec![0.0; er * cols];
    for i in 0..er {
        let src = &noise[i * ec..(i + 1) * ec];
        for j in 0..cols {
            tmp[i * cols + j] = kernel.iter().zip(&src[j..j + width]).map(|(g, w)| g * w).sum();
        }
    }
    // along rows, cropped
    let mut out = vec![0.0; rows * cols];
    for i in 0..rows {
        for (t, g) in kernel.iter().enumerate() {
            let src = &tmp[(i + t) * cols..(i + t + 1) * cols];
            for (o, s) in out[i * cols..(i + 1) * cols].iter_mut().zip(src) {
                *o += g * s;
            }
        }
    }
    for o in &mut out {
        *o /= scale;
    }
    out
}
