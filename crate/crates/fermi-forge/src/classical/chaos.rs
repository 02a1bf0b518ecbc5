//! Chaos diagnostics: area preservation and Lyapunov exponents.

use crate::classical::integrate;
use crate::error::{Error, Result};
use crate::params::ScaledParams;
use crate::state::PhasePoint;

/// Wraps an angle difference into `(−π, π]` so finite differences survive a
/// mod-2π seam.
#[inline]
fn wrap_diff(d: f64) -> f64 {
    let mut d = d.rem_euclid(std::f64::consts::TAU);
    if d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    }
    d
}

/// Central-difference Jacobian determinant of a one-step map at `point`.
///
/// Both output components are treated as cylinder-valued: differences are
/// wrapped into `(−π, π]`, which is exact for plane-valued maps as long as
/// true differences stay below π.
pub fn jacobian_determinant<F>(map: F, point: (f64, f64), h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    if !(h > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let (x, y) = point;
    let (ax_p, ay_p) = map(x + h, y);
    let (ax_m, ay_m) = map(x - h, y);
    let (bx_p, by_p) = map(x, y + h);
    let (bx_m, by_m) = map(x, y - h);
    let d11 = wrap_diff(ax_p - ax_m) / (2.0 * h);
    let d21 = wrap_diff(ay_p - ay_m) / (2.0 * h);
    let d12 = wrap_diff(bx_p - bx_m) / (2.0 * h);
    let d22 = wrap_diff(by_p - by_m) / (2.0 * h);
    Ok(d11 * d22 - d12 * d21)
}

/// Benettin estimate of the largest Lyapunov exponent with its convergence
/// series.
#[derive(Debug, Clone)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    /// Running estimate sampled at each renormalization interval.
    pub series: Vec<(f64, f64)>,
}

const D0: f64 = 1e-8;
const RENORM_GROW: f64 = 100.0;

/// Two-trajectory Benettin estimate for the continuous flow.
///
/// A companion trajectory offset by `d0 = 1e−8` is integrated alongside the
/// reference; whenever their separation grows past `100 d0` or shrinks below
/// `d0/100`, the log-stretch is banked and the companion is rescaled back to
/// `d0` along the current separation vector.
pub fn lyapunov_exponent(
    start: PhasePoint,
    t_total: f64,
    renorm_interval: f64,
    params: &ScaledParams,
) -> Result<LyapunovEstimate> {
    if !(renorm_interval > 0.0) || t_total < 10.0 * renorm_interval {
        return Err(Error::ParameterDomain(format!(
            "need t_total >> renorm_interval > 0, got {t_total} and {renorm_interval}"
        )));
    }
    let dt = 0.01_f64.min(renorm_interval / 4.0);
    let mut a = integrate::StepState {
        z: start.z,
        p: start.p,
        t: start.t,
    };
    let mut b = integrate::StepState {
        z: start.z + D0,
        p: start.p,
        t: start.t,
    };
    let mut clamped = false;
    let mut log_sum = 0.0;
    let mut series = Vec::new();
    let intervals = (t_total / renorm_interval).round() as usize;
    for iv in 1..=intervals {
        let t_target = start.t + iv as f64 * renorm_interval;
        // Step both trajectories together, renormalizing on the growth
        // triggers.
        while a.t < t_target - 1e-12 {
            let step_to = (a.t + dt).min(t_target);
            a = integrate::advance_to(a, step_to, dt, params, &mut clamped)?;
            b = integrate::advance_to(b, step_to, dt, params, &mut clamped)?;
            let dz = b.z - a.z;
            let dp = b.p - a.p;
            let sep = (dz * dz + dp * dp).sqrt();
            if !(sep > 0.0) || !sep.is_finite() {
                return Err(Error::AdjustInterval {
                    separation: sep,
                    interval: renorm_interval,
                });
            }
            if sep > RENORM_GROW * D0 || sep < D0 / RENORM_GROW {
                log_sum += (sep / D0).ln();
                let scale = D0 / sep;
                b.z = a.z + dz * scale;
                b.p = a.p + dp * scale;
            }
        }
        let dz = b.z - a.z;
        let dp = b.p - a.p;
        let sep = (dz * dz + dp * dp).sqrt();
        let banked = log_sum + (sep / D0).ln();
        let elapsed = a.t - start.t;
        series.push((elapsed, banked / elapsed));
    }
    let exponent = series.last().map(|s| s.1).unwrap_or(0.0);
    Ok(LyapunovEstimate { exponent, series })
}

/// Tangent-map Benettin estimate for the standard map at kick strength `k`.
pub fn map_lyapunov(k: f64, start: (f64, f64), n_steps: usize) -> f64 {
    let (mut w, mut phi) = start;
    let (mut vz, mut vp) = (1.0_f64, 0.0_f64);
    let mut log_sum = 0.0;
    for _ in 0..n_steps {
        // Tangent map of ℘' = ℘ + K cos φ, φ' = φ + ℘'.
        let a = -k * phi.sin();
        let dw = vz * 1.0 + vp * a;
        let dphi = vz * 1.0 + vp * (1.0 + a);
        // here vz tracks δ℘ and vp tracks δφ
        let (ndw, ndphi) = (dw, dphi);
        let norm = (ndw * ndw + ndphi * ndphi).sqrt();
        log_sum += norm.ln();
        vz = ndw / norm;
        vp = ndphi / norm;
        let next = crate::classical::standard_map_step(w, phi, k);
        w = next.0;
        phi = next.1;
    }
    log_sum / n_steps as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bounce_map_step, standard_map_step, BounceState};
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn standard_map_is_area_preserving() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let w = rng.gen::<f64>() * 20.0 - 10.0;
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            let det = jacobian_determinant(
                |a, b| standard_map_step(a, b, 3.7),
                (w, phi),
                1e-5,
            )
            .unwrap();
            assert!((det - 1.0).abs() < 1e-9, "det {det} at ({w}, {phi})");
        }
    }

    #[test]
    fn bounce_map_is_area_preserving_at_regular_points() {
        let det = jacobian_determinant(
            |p, phi| {
                let s = BounceState { p, phi, index: 0 };
                let next = bounce_map_step(&s, 0.2).unwrap();
                (next.p, next.phi)
            },
            (8.0, 1.3),
            1e-6,
        )
        .unwrap();
        assert!((det - 1.0).abs() < 1e-6, "det {det}");
    }

    #[test]
    fn dissipative_test_map_has_det_half() {
        let det =
            jacobian_determinant(|w, phi| (0.5 * w, phi + 0.5 * w), (2.0, 1.0), 1e-5).unwrap();
        assert!((det - 0.5).abs() < 1e-9);
    }

    #[test]
    fn map_lyapunov_matches_large_k_asymptote() {
        let l = map_lyapunov(10.0, (0.3, 1.1), 200_000);
        let expected = (10.0_f64 / 2.0).ln();
        assert!((l - expected).abs() < 0.1, "L = {l}, ln(K/2) = {expected}");
    }
}
