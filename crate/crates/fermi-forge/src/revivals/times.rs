//! Modification factors and recurrence-time predictions.
//!
//! Two families of modification factors are exposed deliberately. The
//! cavity-specific closed forms
//!
//! ```text
//! M_cl = (1/8)(λ/E_N)² / (1−μ²)²,    M_Q = (1/8)(λ/E_N)² (3+μ²)/(1−μ²)³
//! ```
//!
//! drive the actual predictions, while the general driven-system forms
//! (`−α/(1−μ²)²`-type, opposite printed sign) feed the regime-identity
//! checks. Both are implemented verbatim; neither is "corrected" toward the
//! other.

use super::frequency::ResonanceData;
use crate::error::{Error, Result};

/// `α = (1/2)(λVζΔ²/ω²)²` of the weak-nonlinearity regime.
pub fn alpha_factor(lambda: f64, v: f64, zeta: f64, delta: f64, omega: f64) -> f64 {
    let x = lambda * v * zeta * delta * delta / (omega * omega);
    0.5 * x * x
}

/// `β = (1/2)(4λV/(N²ζk̄²))²` of the strong-nonlinearity regime; scales as
/// `k̄⁻⁴` exactly.
pub fn beta_factor(lambda: f64, v: f64, n_res: u32, zeta: f64, kbar: f64) -> f64 {
    let x = 4.0 * lambda * v / ((n_res * n_res) as f64 * zeta * kbar * kbar);
    0.5 * x * x
}

/// General driven-system modification factors `(M_cl, M_Q)` with their
/// printed signs: `M_cl = −α/(1−μ²)²`, `M_Q = α(3+μ²)/(1−μ²)³`.
pub fn general_modification_factors(
    lambda: f64,
    v: f64,
    zeta: f64,
    delta: f64,
    omega: f64,
    mu: f64,
) -> Result<(f64, f64)> {
    let denom = 1.0 - mu * mu;
    if denom.abs() < 1e-6 {
        return Err(Error::Singularity(denom.abs()));
    }
    let a = alpha_factor(lambda, v, zeta, delta, omega);
    Ok((
        -a / (denom * denom),
        a * (3.0 + mu * mu) / (denom * denom * denom),
    ))
}

/// Cavity-specific modification factors `(M_cl, M_Q)`.
pub fn modification_factors(lambda: f64, e_n: f64, mu: f64) -> Result<(f64, f64)> {
    if !(e_n > 0.0) {
        return Err(Error::ParameterDomain(format!("need E_N > 0, got {e_n}")));
    }
    let denom = 1.0 - mu * mu;
    if denom.abs() < 1e-6 {
        return Err(Error::Singularity(denom.abs()));
    }
    let base = 0.125 * (lambda / e_n) * (lambda / e_n);
    Ok((
        base / (denom * denom),
        base * (3.0 + mu * mu) / (denom * denom * denom),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityRegime {
    Vanishing,
    Weak,
    Strong,
}

/// Full set of recurrence-time predictions for one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct RevivalEstimate {
    pub omega: f64,
    pub zeta: f64,
    pub delta: f64,
    pub mu: f64,
    pub m_cl: f64,
    pub m_q: f64,
    /// Unmodulated classical period `2π/ω`.
    pub t0_cl: f64,
    /// Unmodulated quantum revival time `2π/(k̄|ζ|)`.
    pub t0_q: f64,
    /// Modulated classical period `[1−M_cl] T₀ Δ`.
    pub t_lambda_cl: f64,
    /// Modulated quantum revival time `[1−M_Q] T₀^Q`.
    pub t_lambda_q: f64,
    pub regime: NonlinearityRegime,
    pub alpha: f64,
    pub beta: f64,
}

/// Classifies the nonlinearity regime from the size of the β factor.
///
/// β compares the drive coupling against the spectral curvature: β ≫ 1 means
/// the curvature is negligible on the coupling scale (vanishing
/// nonlinearity), β ≪ 1 the opposite (strong), with a weak band between.
fn classify(beta: f64) -> NonlinearityRegime {
    if beta > 1e2 {
        NonlinearityRegime::Vanishing
    } else if beta > 1e-2 {
        NonlinearityRegime::Weak
    } else {
        NonlinearityRegime::Strong
    }
}

/// Assembles the recurrence-time predictions.
///
/// At λ = 0 the modification factors vanish and Δ is treated as 1, so both
/// modulated times reduce exactly to their unmodulated values. `|ζ|` enters
/// the revival time because ζ < 0 for this spectrum while a time must be
/// positive.
pub fn recurrence_times(
    lambda: f64,
    r: f64,
    kbar: f64,
    resonance: &ResonanceData,
) -> Result<RevivalEstimate> {
    let omega = super::classical_frequency(r, kbar)?;
    let zeta = super::nonlinearity(r, kbar)?;
    if zeta == 0.0 {
        return Err(Error::VanishingNonlinearity);
    }
    let v = super::matrix_element(resonance.e0, resonance.n_res)?;
    let t0_cl = std::f64::consts::TAU / omega;
    let t0_q = std::f64::consts::TAU / (kbar * zeta.abs());
    let (m_cl, m_q, delta) = if lambda == 0.0 {
        (0.0, 0.0, 1.0)
    } else {
        let (m_cl, m_q) = modification_factors(lambda, resonance.e_n, resonance.mu)?;
        (m_cl, m_q, resonance.delta)
    };
    let alpha = alpha_factor(lambda, v, zeta, delta, omega);
    let beta = beta_factor(lambda, v, resonance.n_res, zeta, kbar);
    Ok(RevivalEstimate {
        omega,
        zeta,
        delta,
        mu: resonance.mu,
        m_cl,
        m_q,
        t0_cl,
        t0_q,
        t_lambda_cl: (1.0 - m_cl) * t0_cl * delta,
        t_lambda_q: (1.0 - m_q) * t0_q,
        regime: classify(beta),
        alpha,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revivals::{classical_frequency, nonlinearity, resonance_data};
    use approx::assert_relative_eq;

    fn sample_resonance() -> ResonanceData {
        let e_n = 2.0 * std::f64::consts::PI.powi(2);
        resonance_data(e_n, 10.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn direct_evaluation_of_cavity_factors() {
        let (m_cl, m_q) = modification_factors(0.3, 10.0, 0.1).unwrap();
        // (1/8)(0.03)²/(0.99)² and (1/8)(0.03)²(3.01)/(0.99)³, double-checked
        // by an independent arithmetic script.
        assert_relative_eq!(m_cl, 1.147842056932966e-4, epsilon = 1e-15);
        assert_relative_eq!(m_q, 3.4899036276446737e-4, epsilon = 1e-15);
    }

    #[test]
    fn lambda_zero_gives_zero_factors() {
        let (m_cl, m_q) = modification_factors(0.0, 10.0, 0.3).unwrap();
        assert_eq!(m_cl, 0.0);
        assert_eq!(m_q, 0.0);
    }

    #[test]
    fn mu_zero_ratio_is_three() {
        let (m_cl, m_q) = modification_factors(0.4, 12.0, 0.0).unwrap();
        assert_relative_eq!(m_q / m_cl, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_mu_rejected() {
        assert!(matches!(
            modification_factors(0.3, 10.0, 1.0 - 1e-9),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn beta_scales_as_inverse_fourth_power_of_kbar() {
        let b1 = beta_factor(0.3, -1.0, 2, -0.02, 4.0);
        let b2 = beta_factor(0.3, -1.0, 2, -0.02, 2.0);
        assert_relative_eq!(b2 / b1, 16.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_modulation_reduces_to_unmodulated_times() {
        let res = sample_resonance();
        let est = recurrence_times(0.0, 5.0, 4.0, &res).unwrap();
        assert_eq!(est.t_lambda_cl, est.t0_cl);
        assert_eq!(est.t_lambda_q, est.t0_q);
        assert_eq!(est.delta, 1.0);
    }

    #[test]
    fn weak_regime_identity() {
        // With M_cl = −α and M_Q = 3α, the combination
        // 3 T_λ^cl T₀^Q + Δ T₀^cl T_λ^Q equals 4 Δ T₀^Q T₀^cl identically.
        let res = sample_resonance();
        let r = 5.0;
        let kbar = 4.0;
        let omega = classical_frequency(r, kbar).unwrap();
        let zeta = nonlinearity(r, kbar).unwrap();
        let v = crate::revivals::matrix_element(res.e0, res.n_res).unwrap();
        let alpha = alpha_factor(0.3, v, zeta, res.delta, omega);
        let t0_cl = std::f64::consts::TAU / omega;
        let t0_q = std::f64::consts::TAU / (kbar * zeta.abs());
        let t_l_cl = (1.0 + alpha) * t0_cl * res.delta;
        let t_l_q = (1.0 - 3.0 * alpha) * t0_q;
        let lhs = 3.0 * t_l_cl * t0_q + res.delta * t0_cl * t_l_q;
        let rhs = 4.0 * res.delta * t0_q * t0_cl;
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
    }

    #[test]
    fn strong_regime_identity() {
        // With M_Q = M_cl = −β the combination
        // T_λ^cl T₀^Q − Δ T₀^cl T_λ^Q vanishes identically.
        let res = sample_resonance();
        let r = 5.0;
        let kbar = 4.0;
        let omega = classical_frequency(r, kbar).unwrap();
        let zeta = nonlinearity(r, kbar).unwrap();
        let v = crate::revivals::matrix_element(res.e0, res.n_res).unwrap();
        let beta = beta_factor(0.3, v, res.n_res, zeta, kbar);
        let t0_cl = std::f64::consts::TAU / omega;
        let t0_q = std::f64::consts::TAU / (kbar * zeta.abs());
        let t_l_cl = (1.0 + beta) * t0_cl * res.delta;
        let t_l_q = (1.0 + beta) * t0_q;
        let lhs = t_l_cl * t0_q - res.delta * t0_cl * t_l_q;
        assert!(lhs.abs() < 1e-9 * (t_l_cl * t0_q).abs());
    }

    #[test]
    fn vanishing_nonlinearity_limit() {
        // As ζ → 0 at fixed λ: T_λ^Q = (1−M_Q)·2π/(k̄|ζ|) diverges while
        // T_λ^cl → T₀^cl Δ.
        let res = sample_resonance();
        let zeta = -1e-8_f64;
        let kbar = 4.0;
        let omega = 1.0;
        let t0_cl = std::f64::consts::TAU / omega;
        let t0_q = std::f64::consts::TAU / (kbar * zeta.abs());
        let (m_cl, m_q) = modification_factors(0.3, res.e_n, res.mu).unwrap();
        let t_l_cl = (1.0 - m_cl) * t0_cl * res.delta;
        let t_l_q = (1.0 - m_q) * t0_q;
        assert!(t_l_q > 1e8);
        assert_relative_eq!(
            t_l_cl,
            t0_cl * res.delta,
            max_relative = 1e-6
        );
    }
}
