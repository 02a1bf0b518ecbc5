//! Run manifest: resolved configuration, seed, code version, and content
//! digests of every emitted file.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Fully resolved configuration, in the config-file format.
    pub config: String,
    pub seed: u64,
    pub version: String,
    pub started_unix: f64,
    pub ended_unix: Option<f64>,
    pub files: Vec<FileRecord>,
    #[serde(skip)]
    out_dir: PathBuf,
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn sha256_hex(path: &Path) -> Result<(String, u64)> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok((format!("{:x}", hasher.finalize()), bytes.len() as u64))
}

impl RunManifest {
    pub fn open(out_dir: &Path, config: String, seed: u64) -> Self {
        RunManifest {
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: now(),
            ended_unix: None,
            files: Vec::new(),
            out_dir: out_dir.to_path_buf(),
        }
    }

    /// Registers an emitted file, digesting its current content.
    pub fn record(&mut self, path: &Path) -> Result<()> {
        let (sha256, bytes) = sha256_hex(path)?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.files.push(FileRecord {
            name,
            sha256,
            bytes,
        });
        Ok(())
    }

    /// Re-digests every recorded file and writes `manifest.json`; a mismatch
    /// means something rewrote an output behind the run's back.
    pub fn close(mut self) -> Result<PathBuf> {
        for rec in &self.files {
            let (sha256, _) = sha256_hex(&self.out_dir.join(&rec.name))?;
            if sha256 != rec.sha256 {
                return Err(Error::Config(format!(
                    "digest mismatch for {}: recorded {}, recomputed {sha256}",
                    rec.name, rec.sha256
                )));
            }
        }
        self.ended_unix = Some(now());
        let path = self.out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&self)
            .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_verifies_digests() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("x.csv");
        std::fs::write(&f, "a,b\n1,2\n").unwrap();
        let mut m = RunManifest::open(dir.path(), "seed = 1".into(), 1);
        m.record(&f).unwrap();
        let path = m.close().unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.contains("x.csv"));
        assert!(text.contains("sha256"));
    }

    #[test]
    fn tamper_detected_at_close() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("x.csv");
        std::fs::write(&f, "a\n").unwrap();
        let mut m = RunManifest::open(dir.path(), String::new(), 1);
        m.record(&f).unwrap();
        std::fs::write(&f, "tampered\n").unwrap();
        assert!(m.close().is_err());
    }
}
