//! Plain-text run configuration: one `key = value` per line, `#` comments.
//!
//! Unknown keys are hard errors so that a typo cannot silently fall back to a
//! default.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// Resolved run configuration in scaled units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kbar: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub v0: f64,
    pub z0: f64,
    pub p0: f64,
    /// Initial position width of the packet / ensemble.
    pub dz: f64,
    pub n_particles: usize,
    pub seed: u64,
    pub grid_n: usize,
    pub grid_zmin: Option<f64>,
    pub grid_zmax: Option<f64>,
    pub t_final: f64,
    pub dt: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kbar: 4.0,
            lambda: 0.0,
            kappa: 0.5,
            v0: 4.0,
            z0: 10.0,
            p0: 0.0,
            dz: 2.0,
            n_particles: 5000,
            seed: 1,
            grid_n: 4096,
            grid_zmin: None,
            grid_zmax: None,
            t_final: 100.0,
            dt: 0.05,
        }
    }
}

impl RunConfig {
    /// Parses the `key = value` format. Later assignments override earlier
    /// ones; unknown keys abort.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |what: &str| -> Result<f64> {
                value.parse::<f64>().map_err(|_| {
                    Error::Config(format!("line {}: {what} `{value}` is not a number", lineno + 1))
                })
            };
            let parse_usize = |what: &str| -> Result<usize> {
                value.parse::<usize>().map_err(|_| {
                    Error::Config(format!(
                        "line {}: {what} `{value}` is not a nonnegative integer",
                        lineno + 1
                    ))
                })
            };
            match key {
                "kbar" => cfg.kbar = parse_f64("kbar")?,
                "lambda" => cfg.lambda = parse_f64("lambda")?,
                "kappa" => cfg.kappa = parse_f64("kappa")?,
                "v0" => cfg.v0 = parse_f64("v0")?,
                "z0" => cfg.z0 = parse_f64("z0")?,
                "p0" => cfg.p0 = parse_f64("p0")?,
                "dz" => cfg.dz = parse_f64("dz")?,
                "n_particles" => cfg.n_particles = parse_usize("n_particles")?,
                "seed" => {
                    cfg.seed = value.parse::<u64>().map_err(|_| {
                        Error::Config(format!(
                            "line {}: seed `{value}` is not a u64",
                            lineno + 1
                        ))
                    })?
                }
                "grid_n" => cfg.grid_n = parse_usize("grid_n")?,
                "grid_zmin" => cfg.grid_zmin = Some(parse_f64("grid_zmin")?),
                "grid_zmax" => cfg.grid_zmax = Some(parse_f64("grid_zmax")?),
                "t_final" => cfg.t_final = parse_f64("t_final")?,
                "dt" => cfg.dt = parse_f64("dt")?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        crate::params::ScaledParams::new(self.kbar, self.lambda, self.kappa, self.v0)?;
        if !(self.dz > 0.0) {
            return Err(Error::Config(format!("dz must be > 0, got {}", self.dz)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::Config(format!(
                "t_final must be > 0, got {}",
                self.t_final
            )));
        }
        if self.grid_n == 0 || !self.grid_n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid_n must be a power of two, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }

    pub fn scaled_params(&self) -> crate::params::ScaledParams {
        crate::params::ScaledParams {
            kbar: self.kbar,
            lambda: self.lambda,
            kappa: self.kappa,
            v0: self.v0,
            conversion: None,
        }
    }

    /// Grid from explicit bounds when given, otherwise the default sizing
    /// rule for the configured packet.
    pub fn grid(&self) -> Result<GridSpec> {
        match (self.grid_zmin, self.grid_zmax) {
            (Some(lo), Some(hi)) => GridSpec::new(lo, hi, self.grid_n),
            (None, None) => GridSpec::default_for(self.z0, self.p0, self.kappa, self.grid_n),
            _ => Err(Error::Config(
                "grid_zmin and grid_zmax must be given together".into(),
            )),
        }
    }

    /// Momentum width matched to the quantum packet, `k̄/(2 dz)`.
    pub fn dp(&self) -> f64 {
        self.kbar / (2.0 * self.dz)
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kbar = {}", self.kbar)?;
        writeln!(f, "lambda = {}", self.lambda)?;
        writeln!(f, "kappa = {}", self.kappa)?;
        writeln!(f, "v0 = {}", self.v0)?;
        writeln!(f, "z0 = {}", self.z0)?;
        writeln!(f, "p0 = {}", self.p0)?;
        writeln!(f, "dz = {}", self.dz)?;
        writeln!(f, "n_particles = {}", self.n_particles)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "grid_n = {}", self.grid_n)?;
        if let Some(lo) = self.grid_zmin {
            writeln!(f, "grid_zmin = {lo}")?;
        }
        if let Some(hi) = self.grid_zmax {
            writeln!(f, "grid_zmax = {hi}")?;
        }
        writeln!(f, "t_final = {}", self.t_final)?;
        write!(f, "dt = {}", self.dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blank_lines() {
        let text = "\n# comment\nkbar = 4.0\nlambda = 0.8   # inline\n\nseed = 99\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.kbar, 4.0);
        assert_eq!(cfg.lambda, 0.8);
        assert_eq!(cfg.seed, 99);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = RunConfig::parse("lambdaa = 0.8\n").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
    }

    #[test]
    fn malformed_line_is_an_error() {
        assert!(RunConfig::parse("kbar 4.0\n").is_err());
        assert!(RunConfig::parse("kbar = four\n").is_err());
    }

    #[test]
    fn display_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.lambda = 0.8;
        cfg.grid_zmin = Some(-20.0);
        cfg.grid_zmax = Some(1200.0);
        let parsed = RunConfig::parse(&cfg.to_string()).unwrap();
        assert_eq!(parsed, cfg);
    }
}
