//! Modulation-strength windows supporting unbounded coherent acceleration.

use crate::error::{Error, Result};

/// One accelerating-mode window `sπ ≤ λ < √(1+(sπ)²)` with the strength of
/// maximal acceleration `λ_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelWindow {
    /// Integer or half-integer window index.
    pub s: f64,
    /// Inclusive lower edge `sπ`.
    pub lo: f64,
    /// Exclusive upper edge `√(1+(sπ)²)`.
    pub hi: f64,
    /// `λ_m = (sπ + √(1+(sπ)²))/2`.
    pub lambda_m: f64,
}

impl AccelWindow {
    #[inline]
    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.lo && lambda < self.hi
    }
}

/// Windows for `s = 1/2, 1, 3/2, …` up to `s_max`.
pub fn accelerating_windows(s_max: f64) -> Result<Vec<AccelWindow>> {
    if !(s_max >= 0.5) {
        return Err(Error::ParameterDomain(format!(
            "s_max must be at least 1/2, got {s_max}"
        )));
    }
    let mut out = Vec::new();
    let mut k = 1u32;
    loop {
        let s = k as f64 * 0.5;
        if s > s_max + 1e-12 {
            break;
        }
        let spi = s * std::f64::consts::PI;
        let hi = (1.0 + spi * spi).sqrt();
        out.push(AccelWindow {
            s,
            lo: spi,
            hi,
            lambda_m: 0.5 * (spi + hi),
        });
        k += 1;
    }
    Ok(out)
}
