//! Space-time probability density ("quantum carpet") collection and export.

use crate::error::Result;
use crate::grid::GridSpec;
use std::io::Write;
use std::path::Path;

/// Matrix of `|ψ(z, t)|²` rows collected during a propagation.
#[derive(Debug, Clone)]
pub struct CarpetField {
    /// One density row per sampled time, raw (not display-scaled).
    pub rows: Vec<Vec<f64>>,
    pub times: Vec<f64>,
    /// Norm recorded when each row was sampled.
    pub norms: Vec<f64>,
    pub grid: GridSpec,
}

impl CarpetField {
    pub fn new(grid: GridSpec) -> Self {
        CarpetField {
            rows: Vec::new(),
            times: Vec::new(),
            norms: Vec::new(),
            grid,
        }
    }

    pub fn push_row(&mut self, t: f64, norm: f64, density: Vec<f64>) {
        debug_assert_eq!(density.len(), self.grid.n);
        self.rows.push(density);
        self.times.push(t);
        self.norms.push(norm);
    }

    /// Display-scaled rows: each frame normalized to its own 99th-percentile
    /// value so frames stay comparable while lone spikes cannot wash the
    /// image out. Values are clipped to `[0, 65535]`.
    pub fn display_rows(&self) -> Vec<Vec<u16>> {
        self.rows
            .iter()
            .map(|row| {
                let mut sorted: Vec<f64> = row.clone();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let idx = ((sorted.len() as f64 - 1.0) * 0.99).round() as usize;
                let scale = sorted[idx].max(f64::MIN_POSITIVE);
                row.iter()
                    .map(|v| ((v / scale) * 65535.0).min(65535.0).max(0.0) as u16)
                    .collect()
            })
            .collect()
    }

    /// Writes the display-scaled carpet as a 16-bit big-endian P5 graymap,
    /// time running down the image.
    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let rows = self.display_rows();
        let h = rows.len();
        let w = self.grid.n;
        let mut out = Vec::with_capacity(32 + 2 * w * h);
        write!(&mut out, "P5\n{w} {h}\n65535\n")?;
        for row in &rows {
            for v in row {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_header_and_size() {
        let grid = GridSpec::new(-1.0, 1.0, 8).unwrap();
        let mut c = CarpetField::new(grid);
        c.push_row(0.0, 1.0, vec![0.1; 8]);
        c.push_row(1.0, 1.0, vec![0.2; 8]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("carpet.pgm");
        c.write_pgm(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header = b"P5\n8 2\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 2 * 8 * 2);
    }

    #[test]
    fn display_scaling_clips_to_u16() {
        let grid = GridSpec::new(-1.0, 1.0, 8).unwrap();
        let mut c = CarpetField::new(grid);
        c.push_row(0.0, 1.0, vec![0.0, 0.1, 0.2, 0.9, 1.0, 0.5, 0.3, 0.05]);
        let rows = c.display_rows();
        assert!(rows[0].iter().all(|&v| v <= 65535));
        assert!(rows[0].iter().any(|&v| v > 0));
    }
}
