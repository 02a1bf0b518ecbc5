//! Uniform position grid for wavefunction storage and spectral transforms.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform grid on `[z_min, z_max)` with a power-of-two point count.
///
/// Grid point `i` sits at `z_min + i Δz` with `Δz = (z_max − z_min)/n`; the
/// half-open convention keeps the spectral transform periodic without a
/// duplicated endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(z_min: f64, z_max: f64, n: usize) -> Result<Self> {
        if !(z_min < 0.0 && 0.0 < z_max) {
            return Err(Error::Grid(format!(
                "grid must straddle the mirror: need z_min < 0 < z_max, got [{z_min}, {z_max}]"
            )));
        }
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "grid size must be a power of two, got {n}"
            )));
        }
        if !z_min.is_finite() || !z_max.is_finite() {
            return Err(Error::Grid("grid bounds must be finite".into()));
        }
        Ok(GridSpec { z_min, z_max, n })
    }

    /// Default bounds for a packet launched at `(z0, p0)`: the lower edge sits
    /// two decay lengths inside the exponential wall, and the upper edge
    /// leaves triple headroom above the ballistic turning point.
    pub fn default_for(z0: f64, p0: f64, kappa: f64, n: usize) -> Result<Self> {
        let turning = z0 + 0.5 * p0 * p0;
        GridSpec::new(-2.0 / kappa, 3.0 * turning.max(1.0), n)
    }

    #[inline]
    pub fn dz(&self) -> f64 {
        (self.z_max - self.z_min) / self.n as f64
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.z_max - self.z_min
    }

    #[inline]
    pub fn z(&self, i: usize) -> f64 {
        self.z_min + i as f64 * self.dz()
    }

    /// All grid positions.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.z(i)).collect()
    }

    /// Momentum associated with FFT bin `j` for scaled Planck constant `kbar`:
    /// `p_j = 2π k̄ f_j / L` with the usual wrapped frequency layout.
    #[inline]
    pub fn momentum(&self, j: usize, kbar: f64) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let f = if j <= n / 2 - 1 { j } else { j - n };
        2.0 * std::f64::consts::PI * kbar * f as f64 / self.length()
    }

    /// Spacing of the momentum grid.
    #[inline]
    pub fn dp(&self, kbar: f64) -> f64 {
        2.0 * std::f64::consts::PI * kbar / self.length()
    }
}
