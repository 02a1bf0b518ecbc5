//! Characteristic values of the fractional-order Mathieu equation
//! `y″ + (a − 2q cos 2x) y = 0`.
//!
//! Writing a Floquet solution `y = e^{iνx} Σ_m c_m e^{2imx}` turns the
//! problem into a symmetric tridiagonal eigenproblem with diagonal
//! `(ν + 2m)²` and off-diagonal `q`. The branch `a_ν(q)` is the eigenvalue
//! that connects to `a_ν(0) = ν²`, tracked by continuation in `q` (steps
//! ≤ 0.25) with eigenvector-overlap matching; for nonzero `q` the matrix is
//! unreduced so its eigenvalues are simple and the tracked branch is
//! unambiguous.

use crate::error::{Error, Result};

/// A converged characteristic value.
#[derive(Debug, Clone)]
pub struct MathieuSolution {
    pub a: f64,
    pub nu: f64,
    pub q: f64,
    /// Half-bandwidth of the Fourier basis actually used.
    pub truncation: usize,
    /// Change of `a` under the final truncation doubling.
    pub residual: f64,
}

/// Eigenvalues of a symmetric tridiagonal matrix via Sturm bisection.
///
/// `diag` has length `n`, `off` the uniform off-diagonal value. Returns the
/// `k`-th smallest eigenvalue (0-based).
fn tridiag_eigenvalue(diag: &[f64], off: f64, k: usize) -> f64 {
    let n = diag.len();
    let off2 = off * off;
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &d) in diag.iter().enumerate() {
        let radius = if i == 0 || i == n - 1 {
            off.abs()
        } else {
            2.0 * off.abs()
        };
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    // Count of eigenvalues below x by the Sturm sequence of the LDLᵀ pivots.
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for &dg in &diag[1..] {
            let denom = if d.abs() < 1e-300 {
                1e-300_f64.copysign(if d == 0.0 { 1.0 } else { d })
            } else {
                d
            };
            d = (dg - x) - off2 / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut lo = lo - 1.0;
    let mut hi = hi + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector by inverse iteration at a converged eigenvalue.
fn tridiag_eigenvector(diag: &[f64], off: f64, eig: f64) -> Vec<f64> {
    let n = diag.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    // Two rounds of inverse iteration with a tiny shift regularization.
    for _ in 0..3 {
        // Solve (T − eig·I + ε) x = v by the Thomas algorithm.
        let eps = 1e-12 * eig.abs().max(1.0);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut b0 = diag[0] - eig + eps;
        if b0.abs() < 1e-300 {
            b0 = 1e-300;
        }
        c[0] = off / b0;
        d[0] = v[0] / b0;
        for i in 1..n {
            let m = diag[i] - eig + eps - off * c[i - 1];
            let m = if m.abs() < 1e-300 {
                1e-300_f64.copysign(if m == 0.0 { 1.0 } else { m })
            } else {
                m
            };
            c[i] = off / m;
            d[i] = (v[i] - off * d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        for (vi, xi) in v.iter_mut().zip(x.iter()) {
            *vi = xi / norm;
        }
    }
    v
}

/// Characteristic value at fixed truncation by continuation from q = 0.
fn char_value_at(nu: f64, q: f64, m_half: usize) -> f64 {
    let n = 2 * m_half + 1;
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let m = i as f64 - m_half as f64;
            (nu + 2.0 * m) * (nu + 2.0 * m) * 1.0
        })
        .collect();
    // Rank of the q = 0 eigenvalue ν² (the m = 0 entry) among the diagonal.
    let target = nu * nu;
    let rank = diag
        .iter()
        .filter(|&&d| d < target - 1e-12 * target.max(1.0))
        .count();
    if q == 0.0 {
        return target;
    }
    let steps = (q.abs() / 0.25).ceil() as usize;
    let mut k = rank;
    let mut prev_vec: Option<Vec<f64>> = None;
    let mut a = target;
    for s in 1..=steps {
        let qs = q * s as f64 / steps as f64;
        // Candidate ranks near the tracked one, matched by overlap.
        let lo_k = k.saturating_sub(2);
        let hi_k = (k + 2).min(n - 1);
        let mut best = (k, f64::NEG_INFINITY, a);
        for cand in lo_k..=hi_k {
            let eig = tridiag_eigenvalue(&diag, qs, cand);
            let vec = tridiag_eigenvector(&diag, qs, eig);
            let overlap = match &prev_vec {
                Some(p) => p.iter().zip(vec.iter()).map(|(x, y)| x * y).sum::<f64>().abs(),
                // First step: overlap with the m = 0 basis vector.
                None => vec[m_half].abs(),
            };
            if overlap > best.1 {
                best = (cand, overlap, eig);
            }
        }
        k = best.0;
        a = best.2;
        prev_vec = Some(tridiag_eigenvector(&diag, qs, a));
    }
    a
}

/// Computes `a_ν(q)` with convergence verification by truncation doubling.
pub fn mathieu_char_value(nu: f64, q: f64, truncation: usize) -> Result<MathieuSolution> {
    if !nu.is_finite() || !q.is_finite() {
        return Err(Error::ParameterDomain(format!(
            "nu and q must be finite, got {nu}, {q}"
        )));
    }
    let min_trunc = (20.0 + nu.abs() + 2.0 * q.abs().sqrt()).ceil() as usize;
    if truncation < min_trunc {
        return Err(Error::ParameterDomain(format!(
            "truncation {truncation} below required {min_trunc} for nu = {nu}, q = {q}"
        )));
    }
    let mut m_half = truncation;
    let mut a = char_value_at(nu, q, m_half);
    let mut history = Vec::new();
    for _ in 0..4 {
        let a2 = char_value_at(nu, q, 2 * m_half);
        let residual = (a2 - a).abs();
        history.push(residual);
        if residual < 1e-10 * a.abs().max(1.0) {
            return Ok(MathieuSolution {
                a: a2,
                nu,
                q,
                truncation: m_half,
                residual,
            });
        }
        a = a2;
        m_half *= 2;
    }
    Err(Error::NonConvergence {
        context: format!("mathieu a_nu(q) at nu = {nu}, q = {q}"),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn free_rotor_limit_is_exact() {
        for nu in [0.0, 0.3, 1.7, 2.0, 5.25] {
            let sol = mathieu_char_value(nu, 0.0, 40).unwrap();
            assert_eq!(sol.a, nu * nu);
        }
    }

    #[test]
    fn a0_of_one_matches_reference() {
        // a_0(1) from the truncated-matrix oracle, stable between
        // truncations 50 and 100.
        let s50 = mathieu_char_value(0.0, 1.0, 50).unwrap();
        let s100 = mathieu_char_value(0.0, 1.0, 100).unwrap();
        assert!((s50.a - s100.a).abs() < 1e-10);
        assert_relative_eq!(s50.a, -0.45513860410, epsilon = 1e-8);
    }

    #[test]
    fn continuity_along_the_branch() {
        let nu = 0.73;
        let mut prev = mathieu_char_value(nu, 0.0, 40).unwrap().a;
        let mut max_jump: f64 = 0.0;
        for i in 1..=20 {
            let q = i as f64 * 0.1;
            let a = mathieu_char_value(nu, q, 40).unwrap().a;
            max_jump = max_jump.max((a - prev).abs());
            prev = a;
        }
        // |Δa| per 0.1-step in q stays bounded (C·δ continuity).
        assert!(max_jump < 0.5, "branch jumped by {max_jump}");
    }

    #[test]
    fn fractional_order_reduces_to_nu_squared_plus_correction() {
        // Second-order perturbation: a ≈ ν² + q²/(2(ν²−1)) for small q.
        let nu = 2.6;
        let q = 0.05;
        let sol = mathieu_char_value(nu, q, 40).unwrap();
        let expected = nu * nu + q * q / (2.0 * (nu * nu - 1.0));
        assert!(
            (sol.a - expected).abs() < 1e-6,
            "a = {}, perturbative {expected}",
            sol.a
        );
    }

    #[test]
    fn undersized_truncation_rejected() {
        assert!(mathieu_char_value(0.0, 100.0, 21).is_err());
    }
}
