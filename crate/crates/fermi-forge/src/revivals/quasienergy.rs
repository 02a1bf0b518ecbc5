//! Quasi-energies from the Mathieu characteristic value, and the
//! resonance-center classifier.

use super::frequency::ResonanceData;
use super::mathieu::mathieu_char_value;
use crate::error::{Error, Result};

/// Inputs shared by a family of quasi-energy evaluations.
#[derive(Debug, Clone, Copy)]
pub struct QuasiEnergyInput {
    pub lambda: f64,
    pub r: f64,
    pub kbar: f64,
    /// Nonlinearity ζ at `r`.
    pub zeta: f64,
    /// Frequency ω at `r`.
    pub omega: f64,
    /// Matrix element V.
    pub v: f64,
    pub n_res: u32,
    /// Constant offset of the expansion; affects absolute quasi-energies
    /// only, never recurrence times.
    pub h0_bar: f64,
}

impl QuasiEnergyInput {
    /// Mathieu parameter `q = 4λV/(N²ζk̄²)`.
    pub fn q(&self) -> f64 {
        4.0 * self.lambda * self.v
            / ((self.n_res * self.n_res) as f64 * self.zeta * self.kbar * self.kbar)
    }

    /// Floquet index `ν(n) = 2(n−r)/N + 2(ω−1/N)/(Nζk̄)`.
    pub fn nu(&self, n: f64) -> f64 {
        let n_res = self.n_res as f64;
        2.0 * (n - self.r) / n_res
            + 2.0 * (self.omega - 1.0 / n_res) / (n_res * self.zeta * self.kbar)
    }
}

/// Quasi-energy `E_ν = (k̄²N²ζ/8) a_ν(q) − (ω−1/N)²/(2ζ) + H̄₀` at quantum
/// number `n`.
pub fn quasi_energy(input: &QuasiEnergyInput, n: f64, truncation: usize) -> Result<f64> {
    if input.zeta == 0.0 {
        return Err(Error::VanishingNonlinearity);
    }
    let nu = input.nu(n);
    let q = input.q();
    let sol = mathieu_char_value(nu, q, truncation)?;
    let n_res = input.n_res as f64;
    let prefactor = input.kbar * input.kbar * n_res * n_res * input.zeta / 8.0;
    let shift = (input.omega - 1.0 / n_res).powi(2) / (2.0 * input.zeta);
    Ok(prefactor * sol.a - shift + input.h0_bar)
}

/// Classification of an initial condition against the resonance island.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterClass {
    /// Inside the harmonic core: recurrences at every classical period only.
    HarmonicRevival,
    Generic,
}

/// Fraction of the ±π pendulum half-width accepted as "small angle".
const CORE_PHASE_FRACTION: f64 = 0.5;
/// Fraction of the island energy half-width accepted as "core".
const CORE_ENERGY_FRACTION: f64 = 1.0;

/// Decides whether a packet launched at `(z0, p0)` sits in the small-angle
/// harmonic core of the resonance island.
///
/// The island center bounces at drive phase π/2 (the stable fixed point of
/// the kick map); the packet's bounce phase is propagated ballistically from
/// `(z0, p0)` at `t = 0`. The energy criterion compares the detuning from the
/// resonance energy against the pendulum half-width `2ω√(λ|V|/|ζ|)`.
pub fn resonance_center_evolution_flag(
    z0: f64,
    p0: f64,
    lambda: f64,
    resonance: &ResonanceData,
    kbar: f64,
) -> Result<CenterClass> {
    if lambda <= 0.0 {
        return Ok(CenterClass::Generic);
    }
    let energy = 0.5 * p0 * p0 + z0;
    if !(energy > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "initial condition below the well bottom: E = {energy}"
        )));
    }
    let p_max = (2.0 * energy).sqrt();
    let omega = std::f64::consts::PI / p_max;
    // Hard-wall orbit angle in [0, 2π): 0 just after a bounce.
    let theta = std::f64::consts::PI * (1.0 - p0 / p_max);
    // Drive phase of the packet's next bounce.
    let t_next = (std::f64::consts::TAU - theta) / omega;
    let bounce_phase = t_next.rem_euclid(std::f64::consts::TAU);
    let mut phase_dist = (bounce_phase - std::f64::consts::FRAC_PI_2).abs();
    if phase_dist > std::f64::consts::PI {
        phase_dist = std::f64::consts::TAU - phase_dist;
    }

    let r = std::f64::consts::PI.powi(2) / (3.0 * kbar * omega.powi(3));
    let zeta = super::nonlinearity(r, kbar)?;
    let v = super::matrix_element(energy, resonance.n_res)?;
    let half_width = 2.0 * omega * (lambda * v.abs() / zeta.abs()).sqrt();
    let detuning = (energy - resonance.e_n).abs();

    if phase_dist <= CORE_PHASE_FRACTION * std::f64::consts::PI
        && detuning <= CORE_ENERGY_FRACTION * half_width
    {
        Ok(CenterClass::HarmonicRevival)
    } else {
        Ok(CenterClass::Generic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revivals::{classical_frequency, matrix_element, nonlinearity, resonance_data};

    fn benchmark_input(lambda: f64, r: f64, kbar: f64) -> QuasiEnergyInput {
        let omega = classical_frequency(r, kbar).unwrap();
        let zeta = nonlinearity(r, kbar).unwrap();
        let scale = (kbar * kbar / 2.0).cbrt();
        let e0 = scale * crate::modes::airy_zero(r.round().max(1.0) as usize).unwrap();
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let res = resonance_data(e_n, e0, kbar, omega).unwrap();
        let v = matrix_element(e0, res.n_res).unwrap();
        QuasiEnergyInput {
            lambda,
            r,
            kbar,
            zeta,
            omega,
            v,
            n_res: res.n_res,
            h0_bar: e0,
        }
    }

    #[test]
    fn lambda_zero_reduces_to_quadratic_expansion() {
        // q = 0 makes a_ν = ν² so E_ν collapses to the quadratic expansion of
        // the spectrum about r (up to the constant offset).
        let input = benchmark_input(0.0, 10.0, 4.0);
        let n_res = input.n_res as f64;
        for dn in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let n = input.r + dn;
            let e = quasi_energy(&input, n, 40).unwrap();
            let nu = input.nu(n);
            let expected = input.kbar * input.kbar * n_res * n_res * input.zeta / 8.0 * nu * nu
                - (input.omega - 1.0 / n_res).powi(2) / (2.0 * input.zeta)
                + input.h0_bar;
            assert!((e - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn vanishing_zeta_is_an_error() {
        let mut input = benchmark_input(0.1, 10.0, 4.0);
        input.zeta = 0.0;
        assert!(matches!(
            quasi_energy(&input, 10.0, 40),
            Err(Error::VanishingNonlinearity)
        ));
    }

    #[test]
    fn benchmark_packet_is_harmonic_revival() {
        // The resonance-center packet of the revival benchmark.
        let kbar = 4.0;
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let energy: f64 = 0.5 * 1.45 * 1.45 + 14.5;
        let omega = std::f64::consts::PI / (2.0 * energy).sqrt();
        let res = resonance_data(e_n, energy, kbar, omega).unwrap();
        let class = resonance_center_evolution_flag(14.5, 1.45, 0.3, &res, kbar).unwrap();
        assert_eq!(class, CenterClass::HarmonicRevival);
    }

    #[test]
    fn stochastic_sea_point_is_generic() {
        let kbar = 4.0;
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let energy: f64 = 0.5 * 3.5 * 3.5 + 5.0;
        let omega = std::f64::consts::PI / (2.0 * energy).sqrt();
        let res = resonance_data(e_n, energy, kbar, omega).unwrap();
        let class = resonance_center_evolution_flag(5.0, 3.5, 0.3, &res, kbar).unwrap();
        assert_eq!(class, CenterClass::Generic);
    }

    #[test]
    fn zero_modulation_is_generic() {
        let kbar = 4.0;
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        let res = resonance_data(e_n, 15.0, kbar, 0.6).unwrap();
        let class = resonance_center_evolution_flag(14.5, 1.45, 0.0, &res, kbar).unwrap();
        assert_eq!(class, CenterClass::Generic);
    }
}
