//! Airy function `Ai` and its negative-axis zeros.
//!
//! No special-function dependency: the Maclaurin series covers `|x| ≤ 6`
//! (worst-case cancellation there still leaves ~1e−12 absolute accuracy) and
//! the standard asymptotic expansions take over beyond, where they are
//! already converged well past 1e−12.

use crate::error::{Error, Result};

/// Ai(0) = 3^(−2/3)/Γ(2/3).
const AI0: f64 = 0.3550280538878172;
/// −Ai′(0) = 3^(−1/3)/Γ(1/3).
const AIP0: f64 = 0.2588194037928068;

const SERIES_EDGE: f64 = 6.0;

/// Maclaurin evaluation: Ai(x) = Ai(0) f(x) + Ai′(0) g(x).
fn ai_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut f_sum = 1.0;
    let mut g_term = x;
    let mut g_sum = x;
    for k in 0..90u32 {
        let k3 = 3.0 * k as f64;
        f_term *= x3 / ((k3 + 2.0) * (k3 + 3.0));
        g_term *= x3 / ((k3 + 3.0) * (k3 + 4.0));
        f_sum += f_term;
        g_sum += g_term;
        if f_term.abs() < 1e-18 * f_sum.abs().max(1.0)
            && g_term.abs() < 1e-18 * g_sum.abs().max(1.0)
        {
            break;
        }
    }
    AI0 * f_sum - AIP0 * g_sum
}

/// Asymptotic coefficients u_k of DLMF 9.7, by upward recurrence.
fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(n + 1);
    u.push(1.0);
    for k in 1..=n {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

fn ai_asymptotic_pos(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = u_coeffs(20);
    let mut sum = 0.0;
    let mut term;
    let mut prev = f64::INFINITY;
    for (k, uk) in u.iter().enumerate() {
        term = if k % 2 == 0 { *uk } else { -*uk } / zeta.powi(k as i32);
        if term.abs() > prev {
            break;
        }
        sum += term;
        prev = term.abs();
    }
    (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25)) * sum
}

fn ai_asymptotic_neg(x: f64) -> f64 {
    // x < 0; z = |x|.
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = u_coeffs(20);
    let mut cos_sum = 0.0;
    let mut sin_sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0.. {
        if 2 * k + 1 >= u.len() {
            break;
        }
        let even = u[2 * k] / zeta.powi(2 * k as i32);
        let odd = u[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        if even.abs() > prev {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        cos_sum += sign * even;
        sin_sum += sign * odd;
        prev = even.abs();
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    (phase.cos() * cos_sum + phase.sin() * sin_sum)
        / (std::f64::consts::PI.sqrt() * z.powf(0.25))
}

/// Airy function of the first kind.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= SERIES_EDGE {
        ai_series(x)
    } else if x > 0.0 {
        ai_asymptotic_pos(x)
    } else {
        ai_asymptotic_neg(x)
    }
}

/// Magnitude of the `n`th zero of Ai on the negative axis: `Ai(−z_n) = 0`,
/// `z_1 < z_2 < …`, refined by bisection to 1e−12.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ParameterDomain("airy zero index starts at 1".into()));
    }
    // Asymptotic location (DLMF 9.9.18) seeds the bracket.
    let t = 3.0 * std::f64::consts::PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t * t;
    let guess = t.powf(2.0 / 3.0)
        * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2)
            + 77125.0 / 82944.0 / (t2 * t2 * t2));
    let f = |z: f64| airy_ai(-z);
    let mut half_width = 0.05;
    let (mut lo, mut hi) = loop {
        let lo = guess - half_width;
        let hi = guess + half_width;
        if f(lo) * f(hi) < 0.0 {
            break (lo, hi);
        }
        half_width *= 2.0;
        if half_width > 1.0 {
            return Err(Error::NonConvergence {
                context: format!("no sign change around airy zero {n}"),
                history: vec![f(guess - half_width), f(guess + half_width)],
            });
        }
    };
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn value_at_origin() {
        assert_relative_eq!(airy_ai(0.0), AI0, max_relative = 1e-15);
    }

    #[test]
    fn matching_across_series_edge() {
        // Series and asymptotic branches must agree where they hand over.
        for &x in &[5.9, 6.1, -5.9, -6.1] {
            let s = ai_series(x);
            let a = if x > 0.0 {
                ai_asymptotic_pos(x.abs())
            } else {
                ai_asymptotic_neg(x)
            };
            assert!(
                (s - a).abs() < 2e-11,
                "branch mismatch {:.3e} at x = {x}",
                (s - a).abs()
            );
        }
    }

    #[test]
    fn first_zeros_match_reference_values() {
        // Frozen from the ODE-integration oracle in the integration tests.
        assert_relative_eq!(airy_zero(1).unwrap(), 2.33810741045977, epsilon = 1e-10);
        assert_relative_eq!(airy_zero(2).unwrap(), 4.08794944413097, epsilon = 1e-10);
        assert_relative_eq!(airy_zero(3).unwrap(), 5.52055982809555, epsilon = 1e-10);
    }

    #[test]
    fn zeros_approach_asymptotic_law() {
        // z_n − (3π(4n−1)/8)^(2/3) → 0 as n grows.
        let mut prev = f64::INFINITY;
        for n in [5usize, 10, 20, 40] {
            let t = 3.0 * std::f64::consts::PI * (4.0 * n as f64 - 1.0) / 8.0;
            let gap = (airy_zero(n).unwrap() - t.powf(2.0 / 3.0)).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-3);
    }
}
