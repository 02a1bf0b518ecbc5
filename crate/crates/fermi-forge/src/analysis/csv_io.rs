//! Deterministic CSV output: one header row, 17 significant digits.

use crate::error::Result;
use std::io::Write;
use std::path::Path;

/// Formats with 17 significant digits, enough to round-trip any f64.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `rows` under a single `header` line.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_g17(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}
