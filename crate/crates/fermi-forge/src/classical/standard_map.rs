//! Chirikov standard map, the large-amplitude reduction of the bounce map
//! under `℘ = −2p`, `K = 4λ`.

use crate::error::{Error, Result};

/// Documented global-chaos threshold of the standard map.
pub const K_CR: f64 = 0.9716;

/// Kick strength and the modulation strength it descends from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    /// Chaos parameter `K = 4λ`.
    pub k: f64,
    /// Modulation strength.
    pub lambda: f64,
}

impl MapParams {
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        Ok(MapParams {
            k: 4.0 * lambda,
            lambda,
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::ParameterDomain(format!("K must be >= 0, got {k}")));
        }
        Ok(MapParams {
            k,
            lambda: k / 4.0,
        })
    }

    /// Whether resonances overlap globally (`K > K_cr`).
    pub fn globally_chaotic(&self) -> bool {
        self.k > K_CR
    }
}

/// One step `℘' = ℘ + K cos φ`, `φ' = φ + ℘'`; the phase is reported mod 2π,
/// the momentum is left unwrapped.
#[inline]
pub fn standard_map_step(w: f64, phi: f64, k: f64) -> (f64, f64) {
    let w_next = w + k * phi.cos();
    let phi_next = (phi + w_next).rem_euclid(std::f64::consts::TAU);
    (w_next, phi_next)
}
