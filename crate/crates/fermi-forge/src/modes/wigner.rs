//! Wigner quasi-probability distribution from a gridded wavefunction.
//!
//! Convention: `W(z,p) = (1/2πk̄) ∫ ψ*(z+y/2) ψ(z−y/2) e^{ipy/k̄} dy`, the
//! choice whose marginals reproduce `|ψ(z)|²` and `|φ(p)|²` exactly. The `y`
//! integral is discretized on `y = 2mΔz` so both half-offsets land on grid
//! points, and evaluated with one FFT per row; the resulting momentum axis
//! spans half the grid's Nyquist range at spacing `πk̄/(NΔz)`.

use crate::error::{Error, Result};
use crate::state::WavefunctionState;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Real-valued Wigner matrix with its axes.
#[derive(Debug, Clone)]
pub struct WignerField {
    /// `w[zi][pj]`.
    pub w: Vec<Vec<f64>>,
    pub z_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub kbar: f64,
    /// Set when the output z-axis undersamples the state.
    pub aliasing_warning: bool,
}

impl WignerField {
    /// Output-grid spacings `(Δz_out, Δp)`.
    pub fn spacings(&self) -> (f64, f64) {
        (
            self.z_axis[1] - self.z_axis[0],
            self.p_axis[1] - self.p_axis[0],
        )
    }

    /// Total integral `∬ W dz dp`.
    pub fn integral(&self) -> f64 {
        let (dz, dp) = self.spacings();
        self.w
            .iter()
            .map(|row| row.iter().sum::<f64>())
            .sum::<f64>()
            * dz
            * dp
    }

    /// Position marginal `∫ W dp` on the z axis.
    pub fn z_marginal(&self) -> Vec<f64> {
        let (_, dp) = self.spacings();
        self.w.iter().map(|row| row.iter().sum::<f64>() * dp).collect()
    }

    /// Momentum marginal `∫ W dz` on the p axis.
    pub fn p_marginal(&self) -> Vec<f64> {
        let (dz, _) = self.spacings();
        let np = self.p_axis.len();
        let mut out = vec![0.0; np];
        for row in &self.w {
            for (j, v) in row.iter().enumerate() {
                out[j] += v * dz;
            }
        }
        out
    }

    /// Most negative entry (zero for nonnegative distributions).
    pub fn min_value(&self) -> f64 {
        self.w
            .iter()
            .flat_map(|r| r.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Computes the Wigner distribution of `state`, keeping every `z_stride`-th
/// position row.
pub fn wigner(state: &WavefunctionState, z_stride: usize) -> Result<WignerField> {
    if z_stride == 0 {
        return Err(Error::ParameterDomain("z_stride must be >= 1".into()));
    }
    let n = state.grid.n;
    let dz = state.grid.dz();
    let kbar = state.kbar;
    // Correlation width scale of the state: flag undersampled output rows.
    let (_, var) = state.position_moments();
    let aliasing_warning = z_stride as f64 * dz > 0.5 * var.sqrt().max(dz);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    let prefactor = dz / (std::f64::consts::PI * kbar);
    let z_indices: Vec<usize> = (0..n).step_by(z_stride).collect();
    let mut rows = Vec::with_capacity(z_indices.len());
    let mut buf = vec![Complex64::default(); n];
    for &i in &z_indices {
        // A_m = ψ*(z_i + m Δz) ψ(z_i − m Δz), zero outside the grid, packed
        // with m wrapped modulo n.
        for slot in buf.iter_mut() {
            *slot = Complex64::default();
        }
        let half = n as isize / 2;
        for m in -half..half {
            let a = i as isize + m;
            let b = i as isize - m;
            if a < 0 || a >= n as isize || b < 0 || b >= n as isize {
                continue;
            }
            let idx = m.rem_euclid(n as isize) as usize;
            buf[idx] = state.psi[a as usize].conj() * state.psi[b as usize];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        // Unwrapped FFT bins j>=n/2 carry negative momenta; reorder so the
        // momentum axis is monotone.
        let mut row = vec![0.0; n];
        for (j, v) in buf.iter().enumerate() {
            let shifted = (j + n / 2) % n;
            row[shifted] = v.re * prefactor;
        }
        rows.push(row);
    }

    let dp = std::f64::consts::PI * kbar / (n as f64 * dz);
    let p_axis: Vec<f64> = (0..n)
        .map(|j| (j as isize - (n / 2) as isize) as f64 * dp)
        .collect();
    let z_axis: Vec<f64> = z_indices.iter().map(|&i| state.grid.z(i)).collect();
    Ok(WignerField {
        w: rows,
        z_axis,
        p_axis,
        kbar,
        aliasing_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::modes::cavity_mode;
    use crate::state::gaussian_packet;

    #[test]
    fn gaussian_wigner_is_nonnegative_and_normalized() {
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let state = gaussian_packet(0.0, 0.5, 1.0, grid, 2.0).unwrap();
        let w = wigner(&state, 1).unwrap();
        assert!(w.min_value() > -1e-12, "min {}", w.min_value());
        assert!((w.integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn marginals_match_position_and_momentum_densities() {
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let state = gaussian_packet(1.0, -0.7, 0.8, grid, 2.0).unwrap();
        let w = wigner(&state, 1).unwrap();

        let zm = w.z_marginal();
        for (i, m) in zm.iter().enumerate() {
            let expected = state.psi[i].norm_sqr();
            assert!(
                (m - expected).abs() < 1e-6,
                "z marginal off by {:e}",
                (m - expected).abs()
            );
        }

        // Momentum marginal against an explicit transform on the Wigner
        // momentum axis.
        let pm = w.p_marginal();
        let dz = grid.dz();
        for (j, &p) in w.p_axis.iter().enumerate().step_by(16) {
            let mut phi = Complex64::default();
            for (i, c) in state.psi.iter().enumerate() {
                let z = grid.z(i);
                phi += c * Complex64::new(0.0, -p * z / state.kbar).exp();
            }
            phi *= dz / (std::f64::consts::TAU * state.kbar).sqrt();
            assert!(
                (pm[j] - phi.norm_sqr()).abs() < 1e-6,
                "p marginal off by {:e} at p = {p}",
                (pm[j] - phi.norm_sqr()).abs()
            );
        }
    }

    #[test]
    fn excited_modes_are_symmetric_with_negativity() {
        let kbar = std::f64::consts::SQRT_2;
        let grid = GridSpec::new(-16.0, 16.0, 1024).unwrap();
        for n in [1usize, 2, 3] {
            let mode = cavity_mode(n, kbar, grid).unwrap();
            let w = wigner(&mode.to_state(), 1).unwrap();
            assert!((w.integral() - 1.0).abs() < 1e-6);
            // Symmetry about p = 0 for a real wavefunction.
            let np = w.p_axis.len();
            for row in w.w.iter().step_by(64) {
                for j in 1..np / 2 {
                    let diff = (row[np / 2 + j] - row[np / 2 - j]).abs();
                    assert!(diff < 1e-9, "asymmetry {diff}");
                }
            }
            if n >= 2 {
                assert!(w.min_value() < -1e-4, "mode {n} lost its negativity");
            }
        }
    }
}
