//! Classical and quantum state containers and their constructors.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// A single classical phase-space point at time `t` (all scaled units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub z: f64,
    pub p: f64,
    pub t: f64,
}

impl PhasePoint {
    pub fn new(z: f64, p: f64, t: f64) -> Result<Self> {
        if !(z.is_finite() && p.is_finite() && t.is_finite()) {
            return Err(Error::Construction(format!(
                "phase point must be finite, got ({z}, {p}, {t})"
            )));
        }
        Ok(PhasePoint { z, p, t })
    }
}

/// A weighted population of classical phase points.
///
/// Weights are optional; absent weights mean the uniform `1/n` Monte Carlo
/// representation of the Liouville density.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub points: Vec<PhasePoint>,
    pub weights: Option<Vec<f64>>,
    /// Seed used to generate the points, when sampled.
    pub seed: Option<u64>,
}

impl Ensemble {
    pub fn from_points(points: Vec<PhasePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Construction("ensemble must be nonempty".into()));
        }
        Ok(Ensemble {
            points,
            weights: None,
            seed: None,
        })
    }

    pub fn with_weights(points: Vec<PhasePoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Construction("ensemble must be nonempty".into()));
        }
        if weights.len() != points.len() {
            return Err(Error::Construction(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::Construction("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Construction(format!(
                "weights must sum to one, got {total}"
            )));
        }
        Ok(Ensemble {
            points,
            weights: Some(weights),
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Weight of point `i` (uniform when no explicit weights are stored).
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.points.len() as f64,
        }
    }
}

/// Samples `n` points with independent Gaussian marginals
/// `z ~ N(z0, dz²)`, `p ~ N(p0, dp²)`, mirroring the quantum packet's
/// position and momentum distributions. Deterministic for a fixed seed.
pub fn sample_gaussian_ensemble(
    z0: f64,
    p0: f64,
    dz: f64,
    dp: f64,
    n: usize,
    seed: u64,
) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::Construction(
            "cannot sample an empty ensemble (n = 0)".into(),
        ));
    }
    if !(dz > 0.0) || !(dp > 0.0) {
        return Err(Error::Construction(format!(
            "widths must be positive, got dz = {dz}, dp = {dp}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zdist = Normal::new(z0, dz)
        .map_err(|e| Error::Construction(format!("z marginal: {e}")))?;
    let pdist = Normal::new(p0, dp)
        .map_err(|e| Error::Construction(format!("p marginal: {e}")))?;
    let points = (0..n)
        .map(|_| {
            let z = zdist.sample(&mut rng);
            let p = pdist.sample(&mut rng);
            PhasePoint { z, p, t: 0.0 }
        })
        .collect();
    Ok(Ensemble {
        points,
        weights: None,
        seed: Some(seed),
    })
}

/// Complex amplitudes on a [`GridSpec`] at time `t`.
///
/// The discrete norm convention is `Σ|ψᵢ|² Δz`; constructors normalize to
/// one. The state carries `k̄`, the only scaled constant its own geometry
/// depends on; the remaining dynamics constants travel with the propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionState {
    pub psi: Vec<Complex64>,
    pub grid: GridSpec,
    pub t: f64,
    pub kbar: f64,
}

impl WavefunctionState {
    /// Discrete norm `Σ|ψᵢ|² Δz`.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dz()
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) {
        let n = self.norm().sqrt();
        if n > 0.0 {
            for c in &mut self.psi {
                *c /= n;
            }
        }
    }

    /// Position density `|ψ(zᵢ)|²`.
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Mean and variance of position under `|ψ|²`.
    pub fn position_moments(&self) -> (f64, f64) {
        let dz = self.grid.dz();
        let mut norm = 0.0;
        let mut mean = 0.0;
        let mut sq = 0.0;
        for (i, c) in self.psi.iter().enumerate() {
            let w = c.norm_sqr() * dz;
            let z = self.grid.z(i);
            norm += w;
            mean += w * z;
            sq += w * z * z;
        }
        let mean = mean / norm;
        (mean, sq / norm - mean * mean)
    }
}

/// Builds a minimum-uncertainty Gaussian packet centred at `(z0, p0)` with
/// position width `dz` (so momentum width `k̄/(2 dz)`), normalized on the
/// grid.
pub fn gaussian_packet(
    z0: f64,
    p0: f64,
    dz: f64,
    grid: GridSpec,
    kbar: f64,
) -> Result<WavefunctionState> {
    if !(dz > 0.0) {
        return Err(Error::Construction(format!(
            "packet width must be positive, got {dz}"
        )));
    }
    if !(kbar > 0.0) {
        return Err(Error::Construction(format!(
            "kbar must be positive, got {kbar}"
        )));
    }
    let margin = 4.0 * dz;
    if z0 - margin < grid.z_min || z0 + margin > grid.z_max {
        return Err(Error::Construction(format!(
            "packet at z0 = {z0} with width {dz} clipped by grid [{}, {}]; need 4 dz margin",
            grid.z_min, grid.z_max
        )));
    }
    let psi: Vec<Complex64> = (0..grid.n)
        .map(|i| {
            let z = grid.z(i);
            let gauss = (-(z - z0) * (z - z0) / (4.0 * dz * dz)).exp();
            let phase = Complex64::new(0.0, p0 * (z - z0) / kbar).exp();
            phase * gauss
        })
        .collect();
    let mut state = WavefunctionState {
        psi,
        grid,
        t: 0.0,
        kbar,
    };
    state.normalize();
    debug_assert!((state.norm() - 1.0).abs() < 1e-9);
    Ok(state)
}
