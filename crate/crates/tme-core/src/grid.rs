//! Uniform detuning grids and the rectangle quadrature they carry.
//!
//! All frequencies in this crate are detunings pre-divided by the pump
//! bandwidth, so the grids are dimensionless and the pump bandwidth never
//! appears at run time.

use crate::error::{Error, Result};

/// Uniform, zero-centered grid on one detuning axis.
///
/// The point count is odd so that zero detuning is always a grid point, and
/// the points come in exact `+/-` pairs. Integrals over the axis use plain
/// rectangle weights equal to `spacing`, which keeps every integral a finite
/// weighted sum and the discretized kernel an ordinary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    n_points: usize,
    half_width: f64,
    spacing: f64,
}

impl FrequencyGrid {
    /// Build a grid of `n_points` spanning `[-half_width, +half_width]`.
    ///
    /// `n_points` must be odd and at least 3; `half_width` must be positive.
    pub fn new(n_points: usize, half_width: f64) -> Result<Self> {
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::BadPointCount(n_points));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::BadHalfWidth(half_width));
        }
        let mid = (n_points - 1) / 2;
        Ok(Self {
            n_points,
            half_width,
            spacing: half_width / mid as f64,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Step between adjacent points, `2 * half_width / (n_points - 1)`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Rectangle quadrature weight of every point.
    pub fn weight(&self) -> f64 {
        self.spacing
    }

    /// The `i`-th detuning. Computed as `(i - mid) * spacing` so the center
    /// point is exactly zero and mirrored indices give exactly negated values.
    pub fn point(&self, i: usize) -> f64 {
        let mid = (self.n_points - 1) / 2;
        (i as f64 - mid as f64) * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }
}
