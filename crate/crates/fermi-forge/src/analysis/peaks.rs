//! Peak detection for autocorrelation traces.

/// Local maxima of a uniformly sampled series with topographic prominence
/// above `prominence`, refined to sub-sample accuracy by a parabola through
/// the three points around each peak. Returns peak times; an empty result is
/// not an error.
pub fn detect_revival_peaks(t: &[f64], c2: &[f64], prominence: f64) -> Vec<f64> {
    let n = c2.len();
    if n < 3 || t.len() != n {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(c2[i] >= c2[i - 1] && c2[i] > c2[i + 1]) {
            continue;
        }
        // Walk outward to the nearest higher sample on each side, tracking
        // the deepest valley on the way; the peak's prominence is its height
        // over the higher of the two valley floors.
        let mut left_min = c2[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            left_min = left_min.min(c2[j]);
            if c2[j] > c2[i] {
                break;
            }
        }
        let mut right_min = c2[i];
        let mut j = i;
        while j < n - 1 {
            j += 1;
            right_min = right_min.min(c2[j]);
            if c2[j] > c2[i] {
                break;
            }
        }
        let prom = c2[i] - left_min.max(right_min);
        if prom <= prominence {
            continue;
        }
        // Quadratic refinement.
        let denom = c2[i - 1] - 2.0 * c2[i] + c2[i + 1];
        let dt = t[i] - t[i - 1];
        let shift = if denom.abs() > 1e-300 {
            0.5 * dt * (c2[i - 1] - c2[i + 1]) / denom
        } else {
            0.0
        };
        peaks.push(t[i] + shift.clamp(-dt, dt));
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_squared_peaks_at_multiples_of_2pi() {
        let dt = 0.05;
        let n = 4000;
        let t: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let c2: Vec<f64> = t.iter().map(|&x| (x / 2.0).cos().powi(2)).collect();
        let peaks = detect_revival_peaks(&t, &c2, 0.2);
        assert!(!peaks.is_empty());
        for (k, &p) in peaks.iter().enumerate() {
            let expected = (k + 1) as f64 * std::f64::consts::TAU;
            assert!(
                (p - expected).abs() < dt / 2.0,
                "peak {p} vs expected {expected}"
            );
        }
    }

    #[test]
    fn flat_series_has_no_peaks() {
        let t: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let c2 = vec![0.5; 100];
        assert!(detect_revival_peaks(&t, &c2, 0.2).is_empty());
    }

    #[test]
    fn small_wiggles_below_prominence_ignored() {
        let t: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        let c2: Vec<f64> = t.iter().map(|&x| 0.5 + 0.05 * x.sin()).collect();
        assert!(detect_revival_peaks(&t, &c2, 0.2).is_empty());
        assert!(!detect_revival_peaks(&t, &c2, 0.01).is_empty());
    }
}
