//! Strang-split single step: half potential phase, full kinetic phase in the
//! transform domain, half potential phase.
//!
//! The potential is explicitly time dependent, so both half phases of one
//! step are evaluated at the midpoint time `t + dt/2`; that keeps the
//! splitting second order in `dt`. The wall factor
//! `V₀ e^(−κz) e^(κλ sin t)` separates into a precomputed `z` profile times a
//! scalar per step, and the pure-gravity part of the phase never changes, so
//! a step costs two FFTs plus one complex exponential per wall-region point.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::params::ScaledParams;
use crate::state::WavefunctionState;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Wall potential values are capped here; the cap only engages deep inside
/// the forbidden region where the amplitude is negligible.
const WALL_CAP: f64 = 1e12;

/// Phase arguments below this threshold multiply the state by 1.0 exactly in
/// f64, so the wall factor is skipped there.
const PHASE_EPS: f64 = 1e-18;

pub struct SplitStepPropagator {
    pub params: ScaledParams,
    pub grid: GridSpec,
    pub dt: f64,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    /// `exp(−i p² dt / 2k̄) / N`, FFT normalization folded in.
    kinetic_phase: Vec<Complex64>,
    /// `exp(−i z dt / 2k̄)`, the gravity half phase.
    gravity_half: Vec<Complex64>,
    /// `e^(−κ z)` profile of the wall.
    wall_profile: Vec<f64>,
    /// Index below which the wall factor is non-negligible.
    wall_extent: usize,
}

impl SplitStepPropagator {
    pub fn new(params: &ScaledParams, grid: GridSpec, dt: f64, kbar: f64) -> Result<Self> {
        params.validate()?;
        if (params.kbar - kbar).abs() > 1e-12 * params.kbar {
            return Err(Error::ParameterDomain(format!(
                "state kbar {kbar} disagrees with params kbar {}",
                params.kbar
            )));
        }
        if !(dt > 0.0) || dt > std::f64::consts::TAU / 64.0 + 1e-12 {
            return Err(Error::StepSize {
                requested: dt,
                suggested: std::f64::consts::TAU / 64.0,
                reason: "split step must resolve the drive period (dt <= 2π/64)".into(),
            });
        }
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(grid.n);
        let fft_inv = planner.plan_fft_inverse(grid.n);
        let scratch_len = fft_fwd
            .get_inplace_scratch_len()
            .max(fft_inv.get_inplace_scratch_len());
        let n = grid.n;
        let kinetic_phase: Vec<Complex64> = (0..n)
            .map(|j| {
                let p = grid.momentum(j, kbar);
                Complex64::new(0.0, -p * p * dt / (2.0 * kbar)).exp() / n as f64
            })
            .collect();
        let gravity_half: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(0.0, -grid.z(i) * dt / (2.0 * kbar)).exp())
            .collect();
        let wall_profile: Vec<f64> = (0..n)
            .map(|i| ((-params.kappa * grid.z(i)).min(700.0)).exp())
            .collect();
        // The strongest per-step wall phase is V₀ b e^{κλ} dt/2k̄; find where
        // it drops below the skip threshold (profile decreases with z).
        let peak = (params.kappa * params.lambda).exp() * params.v0 * dt / (2.0 * kbar);
        let wall_extent = wall_profile
            .iter()
            .position(|b| peak * b < PHASE_EPS)
            .unwrap_or(n);
        Ok(SplitStepPropagator {
            params: *params,
            grid,
            dt,
            fft_fwd,
            fft_inv,
            scratch: vec![Complex64::default(); scratch_len],
            kinetic_phase,
            gravity_half,
            wall_profile,
            wall_extent,
        })
    }

    /// Applies one half potential phase at modulation time `t_mid`.
    fn half_potential(&mut self, psi: &mut [Complex64], t_mid: f64) {
        let kbar = self.params.kbar;
        let factor = (self.params.kappa * self.params.lambda * t_mid.sin()).exp();
        let coeff = self.params.v0 * factor;
        let half = self.dt / (2.0 * kbar);
        for i in 0..self.wall_extent {
            let wall = (coeff * self.wall_profile[i]).min(WALL_CAP);
            psi[i] *= self.gravity_half[i] * Complex64::new(0.0, -wall * half).exp();
        }
        for i in self.wall_extent..psi.len() {
            psi[i] *= self.gravity_half[i];
        }
    }

    /// Advances the state by one `dt`, in place.
    pub fn step(&mut self, state: &mut WavefunctionState) {
        let t_mid = state.t + 0.5 * self.dt;
        self.half_potential(&mut state.psi, t_mid);
        self.fft_fwd
            .process_with_scratch(&mut state.psi, &mut self.scratch);
        for (c, k) in state.psi.iter_mut().zip(self.kinetic_phase.iter()) {
            *c *= k;
        }
        self.fft_inv
            .process_with_scratch(&mut state.psi, &mut self.scratch);
        self.half_potential(&mut state.psi, t_mid);
        state.t += self.dt;
    }
}

/// One Strang step as a standalone operation, with the per-step unitarity
/// contract enforced.
pub fn split_step(
    state: &WavefunctionState,
    dt: f64,
    params: &ScaledParams,
) -> Result<WavefunctionState> {
    let mut prop = SplitStepPropagator::new(params, state.grid, dt, state.kbar)?;
    let norm_before = state.norm();
    let mut next = state.clone();
    prop.step(&mut next);
    let drift = (next.norm() - norm_before).abs();
    if drift > 1e-9 {
        return Err(Error::NormDrift {
            drift,
            limit: 1e-9,
        });
    }
    Ok(next)
}
