//! Histogramming and distribution fits for the equilibrium laws: Gaussian
//! (Maxwellian) and barometric classical profiles, exponential and
//! √-exponential quantum tails.

use crate::error::{Error, Result};

/// Weighted least squares of `ln y` against `x`; returns (intercept, slope,
/// R² of the log-space fit).
pub(crate) fn log_linear_fit(pts: &[(f64, f64, f64)]) -> Result<(f64, f64, f64)> {
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points for a line, got {}",
            pts.len()
        )));
    }
    let mut sw = 0.0;
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, w) in pts {
        let ly = y.ln();
        sw += w;
        sx += w * x;
        sy += w * ly;
        sxx += w * x * x;
        sxy += w * x * ly;
        syy += w * ly * ly;
    }
    let det = sw * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return Err(Error::Fit("degenerate abscissa".into()));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / sw;
    let ss_tot = syy - sy * sy / sw;
    let mut ss_res = 0.0;
    for &(x, y, w) in pts {
        let r = y.ln() - (intercept + slope * x);
        ss_res += w * r * r;
    }
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok((intercept, slope, r2))
}

/// Density histogram.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub bin_centers: Vec<f64>,
    pub counts: Vec<f64>,
    /// Counts normalized to unit integral.
    pub density: Vec<f64>,
    pub bin_width: f64,
}

/// Builds a histogram; bin count defaults to the Freedman–Diaconis rule.
pub fn histogram(samples: &[f64], bins: Option<usize>) -> Result<Histogram> {
    if samples.len() < 2 {
        return Err(Error::Fit("need at least two samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = sorted[0];
    let hi = *sorted.last().unwrap();
    if hi <= lo {
        return Err(Error::Fit("degenerate sample range".into()));
    }
    let n_bins = match bins {
        Some(b) if b >= 1 => b,
        Some(_) => return Err(Error::Fit("bin count must be >= 1".into())),
        None => {
            let q1 = sorted[sorted.len() / 4];
            let q3 = sorted[3 * sorted.len() / 4];
            let iqr = (q3 - q1).max(1e-12 * (hi - lo));
            let width = 2.0 * iqr / (samples.len() as f64).cbrt();
            (((hi - lo) / width).ceil() as usize).clamp(8, 4096)
        }
    };
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0.0; n_bins];
    for &s in samples {
        let idx = (((s - lo) / width) as usize).min(n_bins - 1);
        counts[idx] += 1.0;
    }
    let total: f64 = counts.iter().sum();
    let density = counts.iter().map(|c| c / (total * width)).collect();
    let bin_centers = (0..n_bins)
        .map(|i| lo + (i as f64 + 0.5) * width)
        .collect();
    Ok(Histogram {
        bin_centers,
        counts,
        density,
        bin_width: width,
    })
}

/// Distribution models the artifact fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `P(p) ∝ exp(−|p−p̄|/ℓ)`; parameter ℓ.
    ExponentialP,
    /// `P(z) ∝ exp(−c√z)`; parameter c.
    SqrtExponentialZ,
    /// `P(p) ∝ exp(−(p−p̄)²/2η)`; parameter η (the variance).
    Gaussian,
    /// `P(z) ∝ exp(−z/η)`; parameter η.
    Barometric,
}

/// Outcome of a distribution fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: FitModel,
    /// The model's decay parameter: η, ℓ, or c.
    pub parameter: f64,
    pub r2: f64,
    pub residual_norm: f64,
    /// Abscissa range actually used.
    pub range: (f64, f64),
    /// Set when R² left `[0,1]` numerically and was clamped.
    pub r2_clamped: bool,
}

/// Fits one model to a histogram by weighted least squares in log space
/// (Gaussian: moment matching first, then the same log-space refinement).
pub fn fit_distribution(hist: &Histogram, model: FitModel) -> Result<FitResult> {
    let nonzero: Vec<(f64, f64)> = hist
        .bin_centers
        .iter()
        .zip(hist.density.iter())
        .filter(|(_, &d)| d > 0.0)
        .map(|(&c, &d)| (c, d))
        .collect();
    if nonzero.len() < 10 {
        return Err(Error::Fit(format!(
            "need >= 10 nonzero bins, got {}",
            nonzero.len()
        )));
    }
    let total: f64 = nonzero.iter().map(|v| v.1).sum();
    let mean: f64 = nonzero.iter().map(|&(c, d)| c * d).sum::<f64>() / total;
    let var: f64 = nonzero
        .iter()
        .map(|&(c, d)| (c - mean) * (c - mean) * d)
        .sum::<f64>()
        / total;
    if var <= 0.0 {
        return Err(Error::Fit("degenerate variance".into()));
    }

    // Transform to the model's linear abscissa.
    let pts: Vec<(f64, f64, f64)> = match model {
        FitModel::ExponentialP => nonzero
            .iter()
            .map(|&(c, d)| ((c - mean).abs(), d, d))
            .collect(),
        FitModel::Gaussian => nonzero
            .iter()
            .map(|&(c, d)| ((c - mean) * (c - mean), d, d))
            .collect(),
        FitModel::Barometric => nonzero.iter().map(|&(c, d)| (c, d, d)).collect(),
        FitModel::SqrtExponentialZ => nonzero
            .iter()
            .filter(|&&(c, _)| c >= 0.0)
            .map(|&(c, d)| (c.sqrt(), d, d))
            .collect(),
    };
    let (intercept, slope, r2_raw) = log_linear_fit(&pts)?;
    if slope >= 0.0 {
        return Err(Error::Fit(format!(
            "{model:?} expects a decaying tail; log-slope {slope} is nonnegative"
        )));
    }
    let parameter = match model {
        FitModel::ExponentialP => -1.0 / slope,
        FitModel::Barometric => -1.0 / slope,
        FitModel::SqrtExponentialZ => -slope,
        // ln P = const − x²/(2η) against x².
        FitModel::Gaussian => -1.0 / (2.0 * slope),
    };
    let mut residual_norm = 0.0;
    for &(x, y, _) in &pts {
        let r = y.ln() - (intercept + slope * x);
        residual_norm += r * r;
    }
    let r2_clamped = !(0.0..=1.0).contains(&r2_raw);
    Ok(FitResult {
        model,
        parameter,
        r2: r2_raw.clamp(0.0, 1.0),
        residual_norm: residual_norm.sqrt(),
        range: (
            pts.iter().map(|v| v.0).fold(f64::INFINITY, f64::min),
            pts.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max),
        ),
        r2_clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_distr::Distribution;

    #[test]
    fn gaussian_width_two_recovers_eta_four() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let normal = rand_distr::Normal::new(0.0, 2.0).unwrap();
        let samples: Vec<f64> = (0..200_000).map(|_| normal.sample(&mut rng)).collect();
        let hist = histogram(&samples, Some(80)).unwrap();
        let fit = fit_distribution(&hist, FitModel::Gaussian).unwrap();
        assert!(
            (fit.parameter - 4.0).abs() / 4.0 < 0.01,
            "eta = {}",
            fit.parameter
        );
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn barometric_recovers_eta_three() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<f64> = (0..200_000)
            .map(|_| -3.0 * (1.0 - rng.gen::<f64>()).ln())
            .collect();
        let hist = histogram(&samples, Some(80)).unwrap();
        let fit = fit_distribution(&hist, FitModel::Barometric).unwrap();
        assert!(
            (fit.parameter - 3.0).abs() / 3.0 < 0.01,
            "eta = {}",
            fit.parameter
        );
    }

    #[test]
    fn exponential_p_recovers_ell() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        // Laplace via difference of exponentials.
        let samples: Vec<f64> = (0..200_000)
            .map(|_| {
                let e1 = -2.0 * (1.0 - rng.gen::<f64>()).ln();
                let e2 = -2.0 * (1.0 - rng.gen::<f64>()).ln();
                e1 - e2
            })
            .collect();
        let hist = histogram(&samples, Some(100)).unwrap();
        let fit = fit_distribution(&hist, FitModel::ExponentialP).unwrap();
        assert!(
            (fit.parameter - 2.0).abs() / 2.0 < 0.05,
            "ell = {}",
            fit.parameter
        );
    }

    #[test]
    fn insufficient_bins_rejected() {
        let samples = vec![1.0, 1.1, 1.2, 0.9, 1.05];
        let hist = histogram(&samples, Some(4)).unwrap();
        assert!(fit_distribution(&hist, FitModel::Gaussian).is_err());
    }

    #[test]
    fn freedman_diaconis_default_is_sane() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let normal = rand_distr::Normal::new(0.0, 1.0).unwrap();
        let samples: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let hist = histogram(&samples, None).unwrap();
        assert!(hist.bin_centers.len() >= 20 && hist.bin_centers.len() <= 200);
    }
}
