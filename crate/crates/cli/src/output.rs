//! CSV and manifest emission.
//!
//! CSV files use a header row, comma separators, LF line endings, and
//! 17-significant-digit floats (exact round trip for f64). Every emitted
//! file is recorded in a JSON manifest with its SHA-256 checksum, so a rerun
//! with the same config is byte-reproducible.

use bhfluid::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// 17 significant digits: exact decimal round trip for 64-bit floats.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// An in-memory CSV table; written in one shot so the checksum covers the
/// complete file.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { buf: header.join(",") + "\n", columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "ragged CSV row");
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// Per-case outcome recorded in the manifest (sweeps continue past
/// individual failures).
#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub label: String,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
}

/// Record of one CLI run: what was executed and which files it produced.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: String,
    pub output_dir: String,
    pub files: Vec<FileRecord>,
    pub cases: Vec<CaseRecord>,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &Path, output_dir: &Path) -> Self {
        Self {
            command: command.into(),
            config_path: config_path.display().to_string(),
            output_dir: output_dir.display().to_string(),
            files: Vec::new(),
            cases: Vec::new(),
        }
    }

    /// Write a file under the output directory and record its checksum.
    pub fn emit(&mut self, name: &str, contents: &str) -> Result<()> {
        let dir = PathBuf::from(&self.output_dir);
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| Error::Numerics(format!("cannot write {}: {e}", path.display())))?;
        let digest = Sha256::digest(contents.as_bytes());
        self.files.push(FileRecord { name: name.into(), sha256: format!("{digest:x}") });
        Ok(())
    }

    /// Write the manifest itself as `manifest.json`.
    pub fn finish(&self) -> Result<()> {
        let dir = PathBuf::from(&self.output_dir);
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Numerics(format!("manifest serialization: {e}")))?;
        fs::write(dir.join("manifest.json"), text + "\n")
            .map_err(|e| Error::Numerics(format!("cannot write manifest: {e}")))?;
        Ok(())
    }
}
