//! Cavity frequency, spectrum nonlinearity, and resonance bookkeeping.
//!
//! For the bouncer spectrum `E_n = (k̄²/2)^(1/3) z_n` with the large-`n` Airy
//! zeros, the frequency and nonlinearity at mean quantum number `r` are
//!
//! ```text
//! ω = (π²/(3 r k̄))^(1/3),    ζ = −(π/(9 r² k̄²))^(2/3)
//! ```
//!
//! i.e. the first and second derivatives of the spectrum, `ω = E′_r/k̄` and
//! `ζ = E″_r/k̄²`.

use crate::error::{Error, Result};

/// Guard on `|1 − ω_N/ω|` below which the detuning factor Δ diverges and the
/// secular theory is unreliable.
const NEAR_RESONANCE_GUARD: f64 = 1e-3;

/// Classical bounce frequency at mean quantum number `r`.
pub fn classical_frequency(r: f64, kbar: f64) -> Result<f64> {
    if !(r > 0.0) || !(kbar > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "need r > 0 and kbar > 0, got {r}, {kbar}"
        )));
    }
    Ok((std::f64::consts::PI.powi(2) / (3.0 * r * kbar)).cbrt())
}

/// Spectrum nonlinearity at mean quantum number `r`; strictly negative for
/// the weakly binding bouncer.
pub fn nonlinearity(r: f64, kbar: f64) -> Result<f64> {
    if !(r > 0.0) || !(kbar > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "need r > 0 and kbar > 0, got {r}, {kbar}"
        )));
    }
    let base = std::f64::consts::PI / (9.0 * r * r * kbar * kbar);
    Ok(-base.powf(2.0 / 3.0))
}

/// Coupling matrix element `V ≅ −2E₀/(N²π²)` of the mirror displacement in
/// the large-`N` limit.
pub fn matrix_element(e0: f64, n_res: u32) -> Result<f64> {
    if n_res == 0 {
        return Err(Error::ParameterDomain("resonance number must be >= 1".into()));
    }
    if !(e0 > 0.0) {
        return Err(Error::ParameterDomain(format!("need E0 > 0, got {e0}")));
    }
    Ok(-2.0 * e0 / ((n_res * n_res) as f64 * std::f64::consts::PI.powi(2)))
}

/// Resonance characterization of a wave packet against the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceData {
    /// Mean quantum number of the packet.
    pub r: f64,
    /// Resonance number `N = round(√(2E_N)/π)`.
    pub n_res: u32,
    /// `√(2E_N)/π` before rounding, recorded for scrutiny.
    pub n_raw: f64,
    /// Unperturbed energy at `r`.
    pub e0: f64,
    /// Resonance energy.
    pub e_n: f64,
    /// Resonant frequency `ω_N = 1/N`.
    pub omega_n: f64,
    /// Detuning factor `Δ = (1 − ω_N/ω)^(−1)`.
    pub delta: f64,
    /// `μ = −(k̄/4)(1/E₀)√(E_N/E₀)`.
    pub mu: f64,
}

/// Builds [`ResonanceData`] from the resonance energy, the packet energy, and
/// the packet frequency.
pub fn resonance_data(e_n: f64, e0: f64, kbar: f64, omega: f64) -> Result<ResonanceData> {
    if !(e_n > 0.0) || !(e0 > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "energies must be positive, got E_N = {e_n}, E0 = {e0}"
        )));
    }
    if !(omega > 0.0) || !(kbar > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "need omega > 0 and kbar > 0, got {omega}, {kbar}"
        )));
    }
    let n_raw = (2.0 * e_n).sqrt() / std::f64::consts::PI;
    let n_res = n_raw.round().max(1.0) as u32;
    let omega_n = 1.0 / n_res as f64;
    let detuning = 1.0 - omega_n / omega;
    if detuning.abs() < NEAR_RESONANCE_GUARD {
        return Err(Error::NearResonance {
            detuning: detuning.abs(),
            guard: NEAR_RESONANCE_GUARD,
        });
    }
    let mu = -(kbar / 4.0) * (1.0 / e0) * (e_n / e0).sqrt();
    // r consistent with ω through the frequency relation.
    let r = std::f64::consts::PI.powi(2) / (3.0 * kbar * omega.powi(3));
    Ok(ResonanceData {
        r,
        n_res,
        n_raw,
        e0,
        e_n,
        omega_n,
        delta: 1.0 / detuning,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_frequency_by_construction() {
        let kbar = 4.0;
        let r = std::f64::consts::PI.powi(2) / (3.0 * kbar);
        assert_relative_eq!(classical_frequency(r, kbar).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn frequency_decreases_with_r() {
        let kbar = 4.0;
        let mut prev = f64::INFINITY;
        for r in [0.5, 1.0, 2.0, 5.0, 20.0] {
            let w = classical_frequency(r, kbar).unwrap();
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn nonlinearity_negative_and_shrinking() {
        let z1 = nonlinearity(2.0, 4.0).unwrap();
        let z2 = nonlinearity(4.0, 4.0).unwrap();
        let z3 = nonlinearity(2.0, 8.0).unwrap();
        assert!(z1 < 0.0 && z2 < 0.0 && z3 < 0.0);
        assert!(z2.abs() < z1.abs());
        assert!(z3.abs() < z1.abs());
    }

    #[test]
    fn nonlinearity_matches_airy_spectrum_curvature() {
        // Independent oracle: central finite differences of the exact cavity
        // spectrum E_n = (k̄²/2)^(1/3) z_n around n = r.
        let kbar = 4.0_f64;
        let r = 10.0_f64;
        let scale = (kbar * kbar / 2.0).cbrt();
        let e = |n: usize| scale * crate::modes::airy_zero(n).unwrap();
        let d2 = e(11) - 2.0 * e(10) + e(9);
        let zeta_fd = d2 / (kbar * kbar);
        let zeta = nonlinearity(r, kbar).unwrap();
        assert!(
            (zeta - zeta_fd).abs() / zeta_fd.abs() < 0.05,
            "zeta {zeta} vs finite-difference {zeta_fd}"
        );
    }

    #[test]
    fn resonance_rounding_and_detuning() {
        // E_N = π²/2 gives N = 1 exactly.
        let e_n = std::f64::consts::PI.powi(2) / 2.0;
        let data = resonance_data(e_n, 5.0, 4.0, 2.0).unwrap();
        assert_eq!(data.n_res, 1);
        assert_relative_eq!(data.n_raw, 1.0, epsilon = 1e-12);
        // ω = 2 ω_N gives Δ = 2 (N = 2 resonance driven at ω = 1).
        let e_n2 = 2.0 * std::f64::consts::PI.powi(2);
        let data = resonance_data(e_n2, 5.0, 4.0, 1.0).unwrap();
        assert_eq!(data.n_res, 2);
        assert_relative_eq!(data.delta, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn mu_vanishes_with_kbar() {
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let a = resonance_data(e_n, 5.0, 1.0, 1.0).unwrap();
        let b = resonance_data(e_n, 5.0, 0.01, 1.0).unwrap();
        assert!(b.mu.abs() < a.mu.abs() * 0.02);
    }

    #[test]
    fn near_resonance_guard_trips() {
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let err = resonance_data(e_n, 5.0, 4.0, 0.5000001).unwrap_err();
        assert!(matches!(err, Error::NearResonance { .. }));
    }

    #[test]
    fn matrix_element_sign_and_scaling() {
        let v1 = matrix_element(10.0, 1).unwrap();
        let v2 = matrix_element(10.0, 2).unwrap();
        assert!(v1 < 0.0 && v2 < 0.0);
        assert_relative_eq!(v2 / v1, 0.25, epsilon = 1e-12);
        // E0 = π²/2, N = 1 → V = −1.
        let v = matrix_element(std::f64::consts::PI.powi(2) / 2.0, 1).unwrap();
        assert_relative_eq!(v, -1.0, epsilon = 1e-12);
    }
}
