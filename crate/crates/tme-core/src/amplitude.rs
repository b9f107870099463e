//! Complex spectral amplitudes on a frequency grid: seeds, raw outputs and
//! normalized mode functions, with the quadrature inner product they share.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

/// What a spectral amplitude currently represents in the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// An injected trial pulse.
    Seed,
    /// A raw, un-normalized map output.
    Output,
    /// A converged, unit-norm, phase-fixed mode function.
    Mode,
}

/// A complex pulse shape sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone)]
pub struct SpectralAmplitude {
    grid: FrequencyGrid,
    values: DVector<Complex64>,
    role: Role,
}

impl SpectralAmplitude {
    pub fn new(grid: FrequencyGrid, values: DVector<Complex64>, role: Role) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        Ok(Self { grid, values, role })
    }

    /// Unit-norm Gaussian `exp(-(w - center)^2 / 4)` seed.
    pub fn gaussian(grid: FrequencyGrid, center: f64) -> Result<Self> {
        let values = DVector::from_iterator(
            grid.n_points(),
            (0..grid.n_points()).map(|i| {
                let w = grid.point(i) - center;
                Complex64::new((-w * w / 4.0).exp(), 0.0)
            }),
        );
        Self::new(grid, values, Role::Seed)?.normalized()
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &DVector<Complex64> {
        &self.values
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Quadrature inner product `sum_i conj(a_i) b_i * weight`, conjugate-linear
    /// in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let dot: Complex64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(dot * self.grid.weight())
    }

    /// Quadrature norm `sqrt(sum_i |a_i|^2 * weight)`.
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.weight()).sqrt()
    }

    /// Rescale to unit quadrature norm; errors on a (numerically) zero input.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::ZeroAmplitude);
        }
        self.values.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    /// The unit factor that rotates the entry of largest magnitude onto the
    /// positive real axis. Ties go to the lowest grid index.
    pub fn phase_factor(&self) -> Complex64 {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for (i, z) in self.values.iter().enumerate() {
            let m = z.norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        let z = self.values[best];
        if best_mag <= 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            z.conj() / best_mag
        }
    }

    /// Multiply every value by the unit factor `c`.
    pub fn rotated(mut self, c: Complex64) -> Self {
        self.values.iter_mut().for_each(|z| *z *= c);
        self
    }

    /// Entrywise complex conjugate.
    pub fn conjugated(mut self) -> Self {
        self.values.iter_mut().for_each(|z| *z = z.conj());
        self
    }

    /// Promote to a mode: unit norm, phase convention applied, role `Mode`.
    pub fn into_mode(self) -> Result<Self> {
        let mut m = self.normalized()?;
        let c = m.phase_factor();
        m = m.rotated(c);
        m.role = Role::Mode;
        Ok(m)
    }
}

/// Largest deviation of a mode family from quadrature orthonormality,
/// `max_ij |<m_i, m_j> - delta_ij|`.
pub fn orthonormality_deviation(modes: &[SpectralAmplitude]) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..modes.len() {
        for j in i..modes.len() {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = modes[i].inner(&modes[j])?;
            worst = worst.max((got - Complex64::new(want, 0.0)).norm());
        }
    }
    Ok(worst)
}
