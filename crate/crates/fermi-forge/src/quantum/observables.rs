//! Momentum-space density and inner-product observables.

use crate::error::{Error, Result};
use crate::state::WavefunctionState;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Momentum density `|φ(p_j)|²` on the k̄-consistent momentum grid, sorted by
/// momentum; integrates (with spacing `Δp = 2πk̄/L`) to the state's norm.
pub fn momentum_distribution(state: &WavefunctionState) -> Vec<(f64, f64)> {
    let n = state.grid.n;
    let mut buf = state.psi.clone();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(&mut buf, &mut scratch);
    let dz = state.grid.dz();
    let prefactor = dz * dz / (std::f64::consts::TAU * state.kbar);
    let mut out: Vec<(f64, f64)> = buf
        .iter()
        .enumerate()
        .map(|(j, c)| (state.grid.momentum(j, state.kbar), c.norm_sqr() * prefactor))
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Mean and variance of momentum under `|φ(p)|²`.
pub fn momentum_moments(state: &WavefunctionState) -> (f64, f64) {
    let dist = momentum_distribution(state);
    let dp = state.grid.dp(state.kbar);
    let mut norm = 0.0;
    let mut mean = 0.0;
    let mut sq = 0.0;
    for (p, d) in dist {
        let w = d * dp;
        norm += w;
        mean += w * p;
        sq += w * p * p;
    }
    let mean = mean / norm;
    (mean, (sq / norm - mean * mean).max(0.0))
}

/// Squared autocorrelation `C² = |⟨ψ_a|ψ_b⟩|²` with the grid weight.
pub fn autocorrelation(a: &WavefunctionState, b: &WavefunctionState) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!(
            "[{}, {}] x {} vs [{}, {}] x {}",
            a.grid.z_min, a.grid.z_max, a.grid.n, b.grid.z_min, b.grid.z_max, b.grid.n
        )));
    }
    let ip: Complex64 = a
        .psi
        .iter()
        .zip(b.psi.iter())
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        * a.grid.dz();
    Ok(ip.norm_sqr())
}
