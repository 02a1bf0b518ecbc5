//! Laboratory parameters and their dimensionless counterparts.
//!
//! The scaling `z → (Ω²/g) z`, `p → (Ω/mg) p`, `t → Ω t` turns the
//! center-of-mass Hamiltonian of an atom above a modulated evanescent-wave
//! mirror into
//!
//! ```text
//! H = p²/2 + z + V₀ exp(−κ (z − λ sin t))
//! ```
//!
//! with exactly four dimensionless constants. The scaled Planck constant
//! `k̄ = (Ω/Ω₀)³`, `Ω₀ = (m g²/ħ)^(1/3)`, fixes the commutator `[z,p] = i k̄`,
//! so the modulation frequency alone moves the system between semiclassical
//! and deep-quantum regimes.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Laboratory-frame constants for one experimental configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Atomic mass (kg).
    pub mass: f64,
    /// Gravitational acceleration (m/s²).
    pub gravity: f64,
    /// Mirror decay constant (1/m).
    pub kappa_phys: f64,
    /// Effective Rabi frequency (rad/s).
    pub omega_eff: f64,
    /// Mirror-phase modulation amplitude (dimensionless).
    pub epsilon: f64,
    /// Modulation frequency (rad/s).
    pub omega: f64,
    /// Planck constant (J s).
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("gravity", self.gravity),
            ("kappa_phys", self.kappa_phys),
            ("omega", self.omega),
            ("hbar", self.hbar),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ParameterDomain(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        if !(self.omega_eff >= 0.0) || !self.omega_eff.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "omega_eff must be nonnegative and finite, got {}",
                self.omega_eff
            )));
        }
        Ok(())
    }

    /// Reference frequency `Ω₀ = (m g²/ħ)^(1/3)` at which `k̄ = 1`.
    pub fn omega_ref(&self) -> f64 {
        (self.mass * self.gravity * self.gravity / self.hbar).cbrt()
    }
}

/// Record of the physical inputs behind a [`ScaledParams`], kept so the
/// scaling can be inverted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionRecord {
    pub physical: PhysicalParams,
    pub omega_ref: f64,
}

/// The four dimensionless constants of the scaled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParams {
    /// Scaled Planck constant `k̄ = (Ω/Ω₀)³`.
    pub kbar: f64,
    /// Modulation strength `λ = ε Ω²/g`.
    pub lambda: f64,
    /// Scaled mirror decay constant `κ = κ_phys g/Ω²`.
    pub kappa: f64,
    /// Scaled mirror height `V₀ = ħ Ω_eff Ω²/(m g²)`.
    pub v0: f64,
    /// Physical-to-scaled conversion, present when built by
    /// [`scale_parameters`].
    pub conversion: Option<ConversionRecord>,
}

impl ScaledParams {
    /// Constructs directly from dimensionless values, checking invariants.
    pub fn new(kbar: f64, lambda: f64, kappa: f64, v0: f64) -> Result<Self> {
        let p = ScaledParams {
            kbar,
            lambda,
            kappa,
            v0,
            conversion: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kbar > 0.0) || !self.kbar.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "kbar must be > 0, got {}",
                self.kbar
            )));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        if !(self.v0 >= 0.0) || !self.v0.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "v0 must be >= 0, got {}",
                self.v0
            )));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Converts laboratory constants into the dimensionless system.
pub fn scale_parameters(phys: &PhysicalParams) -> Result<ScaledParams> {
    phys.validate()?;
    let omega_ref = phys.omega_ref();
    let ratio = phys.omega / omega_ref;
    let omega_sq = phys.omega * phys.omega;
    let scaled = ScaledParams {
        kbar: ratio * ratio * ratio,
        lambda: phys.epsilon * omega_sq / phys.gravity,
        kappa: phys.kappa_phys * phys.gravity / omega_sq,
        v0: phys.hbar * phys.omega_eff * omega_sq
            / (phys.mass * phys.gravity * phys.gravity),
        conversion: Some(ConversionRecord {
            physical: *phys,
            omega_ref,
        }),
    };
    scaled.validate()?;
    Ok(scaled)
}

/// Inverts the scaling, given the mechanical anchors `(m, g, ħ)`.
pub fn unscale_parameters(
    scaled: &ScaledParams,
    mass: f64,
    gravity: f64,
    hbar: f64,
) -> Result<PhysicalParams> {
    scaled.validate()?;
    let omega_ref = (mass * gravity * gravity / hbar).cbrt();
    let omega = omega_ref * scaled.kbar.cbrt();
    let omega_sq = omega * omega;
    let phys = PhysicalParams {
        mass,
        gravity,
        kappa_phys: scaled.kappa * omega_sq / gravity,
        omega_eff: scaled.v0 * mass * gravity * gravity / (hbar * omega_sq),
        epsilon: scaled.lambda * gravity / omega_sq,
        omega,
        hbar,
    };
    Ok(phys)
}
