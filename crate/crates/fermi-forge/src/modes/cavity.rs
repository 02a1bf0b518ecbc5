//! Bound states of the triangular well: gravity above a hard floor.
//!
//! In scaled units the stationary problem `−(k̄²/2)ψ″ + zψ = Eψ` on `z ≥ 0`
//! with `ψ(0) = 0` is solved by `ψ_n(z) ∝ Ai((2/k̄²)^(1/3) z − z_n)` with
//! energy `E_n = (k̄²/2)^(1/3) z_n`, where `z_n` is the nth Airy zero.

use super::airy::{airy_ai, airy_zero};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::state::WavefunctionState;
use num_complex::Complex64;

/// One cavity eigenstate sampled on a grid.
#[derive(Debug, Clone)]
pub struct CavityMode {
    /// Mode index, starting at 1.
    pub n: usize,
    /// Scaled eigenvalue `E_n = (k̄²/2)^(1/3) z_n`.
    pub energy: f64,
    /// The Airy zero `z_n` behind the eigenvalue.
    pub airy_zero: f64,
    /// Real amplitudes on the grid, zero for `z < 0`, unit discrete norm.
    pub psi: Vec<f64>,
    pub grid: GridSpec,
    pub kbar: f64,
}

impl CavityMode {
    /// View as a complex wavefunction at `t = 0`.
    pub fn to_state(&self) -> WavefunctionState {
        WavefunctionState {
            psi: self.psi.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            grid: self.grid,
            t: 0.0,
            kbar: self.kbar,
        }
    }
}

/// Computes the nth cavity mode on `grid`.
///
/// The grid must reach at least 1.5× the classical turning point `E_n`;
/// otherwise the tail would be truncated and the normalization silently
/// wrong, so construction refuses.
pub fn cavity_mode(n: usize, kbar: f64, grid: GridSpec) -> Result<CavityMode> {
    if n == 0 {
        return Err(Error::ParameterDomain("mode index starts at 1".into()));
    }
    if !(kbar > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "kbar must be positive, got {kbar}"
        )));
    }
    let zn = airy_zero(n)?;
    let scale = (2.0 / (kbar * kbar)).cbrt();
    let energy = zn / scale;
    if grid.z_max < 1.5 * energy {
        return Err(Error::Grid(format!(
            "grid reaches z = {} but mode {n} turns at E_n = {energy}; need z_max >= {}",
            grid.z_max,
            1.5 * energy
        )));
    }
    let mut psi: Vec<f64> = (0..grid.n)
        .map(|i| {
            let z = grid.z(i);
            if z < 0.0 {
                0.0
            } else {
                airy_ai(scale * z - zn)
            }
        })
        .collect();
    let norm = (psi.iter().map(|v| v * v).sum::<f64>() * grid.dz()).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Grid(format!("mode {n} has zero norm on this grid")));
    }
    for v in &mut psi {
        *v /= norm;
    }
    Ok(CavityMode {
        n,
        energy,
        airy_zero: zn,
        psi,
        grid,
        kbar,
    })
}

/// Projection coefficients of a state onto modes `1..=m_max`.
pub fn mode_overlaps(
    state: &WavefunctionState,
    m_max: usize,
) -> Result<Vec<Complex64>> {
    let dz = state.grid.dz();
    (1..=m_max)
        .map(|n| {
            let mode = cavity_mode(n, state.kbar, state.grid)?;
            Ok(mode
                .psi
                .iter()
                .zip(state.psi.iter())
                .map(|(m, c)| c * m)
                .sum::<Complex64>()
                * dz)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fine_grid() -> GridSpec {
        GridSpec::new(-0.029296875, 30.0, 32768).unwrap()
    }

    #[test]
    fn ground_energy_equals_first_airy_zero_when_kbar_sq_half_is_one() {
        // kbar²/2 = 1 makes the scale factor unity.
        let kbar = std::f64::consts::SQRT_2;
        let mode = cavity_mode(1, kbar, fine_grid()).unwrap();
        assert_relative_eq!(mode.energy, 2.33810741045977, epsilon = 1e-9);
        assert_relative_eq!(mode.airy_zero, mode.energy, epsilon = 1e-12);
    }

    #[test]
    fn stationary_equation_residual_small() {
        let kbar = std::f64::consts::SQRT_2;
        let grid = fine_grid();
        let dz = grid.dz();
        for n in [1usize, 3, 6] {
            let mode = cavity_mode(n, kbar, grid).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 2..grid.n - 2 {
                let z = grid.z(i);
                if z <= 4.0 * dz {
                    continue;
                }
                // Five-point second derivative.
                let d2 = (-mode.psi[i - 2] + 16.0 * mode.psi[i - 1] - 30.0 * mode.psi[i]
                    + 16.0 * mode.psi[i + 1]
                    - mode.psi[i + 2])
                    / (12.0 * dz * dz);
                let r = -0.5 * kbar * kbar * d2 + z * mode.psi[i] - mode.energy * mode.psi[i];
                num += r * r;
                den += mode.psi[i] * mode.psi[i];
            }
            let rel = (num / den).sqrt();
            assert!(rel < 1e-6, "mode {n} residual {rel}");
        }
    }

    #[test]
    fn modes_are_orthonormal() {
        let kbar = std::f64::consts::SQRT_2;
        let grid = fine_grid();
        let modes: Vec<_> = (1..=10)
            .map(|n| cavity_mode(n, kbar, grid).unwrap())
            .collect();
        let dz = grid.dz();
        for a in &modes {
            for b in &modes {
                let ip: f64 =
                    a.psi.iter().zip(b.psi.iter()).map(|(x, y)| x * y).sum::<f64>() * dz;
                let expected = if a.n == b.n { 1.0 } else { 0.0 };
                assert!(
                    (ip - expected).abs() < 1e-8,
                    "<{}|{}> = {ip}",
                    a.n,
                    b.n
                );
            }
        }
    }

    #[test]
    fn spectrum_increases_with_shrinking_gaps() {
        let kbar = 2.0;
        let grid = GridSpec::new(-0.0244140625, 100.0, 65536).unwrap();
        let energies: Vec<f64> = (1..=50)
            .map(|n| cavity_mode(n, kbar, grid).unwrap().energy)
            .collect();
        for w in energies.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in energies.windows(3) {
            assert!(w[2] - w[1] < w[1] - w[0], "gaps must shrink: {w:?}");
        }
    }

    #[test]
    fn small_grid_refused() {
        let kbar = std::f64::consts::SQRT_2;
        let grid = GridSpec::new(-0.5, 3.0, 256).unwrap();
        assert!(cavity_mode(4, kbar, grid).is_err());
    }
}
