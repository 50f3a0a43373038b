//! Artifact writers. Files appear under their final name only when complete.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::ExperimentError;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through `<name>.partial` and renames on success.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let io = |e: std::io::Error| ExperimentError::Io(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&partial).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&partial, path).map_err(io)
}

/// A CSV table with a fixed header, built in memory.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            columns: header.len(),
            text: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Collects the artifacts of one run in an output directory.
#[derive(Debug)]
pub struct ArtifactSink {
    dir: PathBuf,
    written: Vec<(String, String)>,
}

impl ArtifactSink {
    pub fn new(dir: &Path) -> Result<Self, ExperimentError> {
        fs::create_dir_all(dir)
            .map_err(|e| ExperimentError::Io(format!("{}: {e}", dir.display())))?;
        Ok(ArtifactSink {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<(), ExperimentError> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.written
            .push((name.to_string(), hex::encode(Sha256::digest(bytes))));
        Ok(())
    }

    pub fn csv(&mut self, name: &str, csv: &Csv) -> Result<(), ExperimentError> {
        self.put(name, csv.as_str().as_bytes())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), ExperimentError> {
        let mut s =
            serde_json::to_string_pretty(value).map_err(|e| ExperimentError::Io(e.to_string()))?;
        s.push('\n');
        self.put(name, s.as_bytes())
    }

    /// Names and SHA-256 digests of everything written so far.
    pub fn artifacts(&self) -> &[(String, String)] {
        &self.written
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub workers: usize,
    pub wall_time_s: f64,
    pub exit_code: i32,
    pub artifacts: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
