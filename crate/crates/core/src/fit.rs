//! Power-law fit `J = c · N^(α − 1)` by least squares on `(ln N, ln J)`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Transport exponent: `α = 0` is diffusive (`J ∝ 1/N`), `α = 1` ballistic.
    pub alpha: f64,
    /// `c = exp(intercept)`.
    pub prefactor: f64,
    /// Pearson correlation of `(ln N, ln J)`. Data with no spread in `ln J`
    /// lie exactly on the fitted line and get `R = 1`.
    pub regression_coefficient: f64,
    pub slope: f64,
    pub intercept: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn r_squared(&self) -> f64 {
        self.regression_coefficient * self.regression_coefficient
    }

    pub fn predict(&self, n: f64) -> f64 {
        self.prefactor * n.powf(self.slope)
    }
}

/// Fits `(N, J)` pairs. Needs at least three points, `N ≥ 2` and `J > 0`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: points.len(),
        });
    }
    if points.iter().any(|&(n, _)| !n.is_finite() || n < 2.0) {
        return Err(Error::Domain("chain sizes must be at least 2"));
    }
    if points.iter().any(|&(_, j)| !j.is_finite() || j <= 0.0) {
        return Err(Error::Domain("currents must be positive"));
    }
    let count = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(n, j)| (sx + n.ln(), sy + j.ln()));
    let (mx, my) = (sx / count, sy / count);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(n, j) in points {
        let dx = n.ln() - mx;
        let dy = j.ln() - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Domain("all chain sizes are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r = if syy == 0.0 {
        1.0
    } else {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    };
    Ok(PowerLawFit {
        alpha: 1.0 + slope,
        prefactor: intercept.exp(),
        regression_coefficient: r,
        slope,
        intercept,
        n_points: points.len(),
    })
}
