//! Output collection: CSV/JSON artifact files plus a run manifest with
//! content digests, so reruns can be compared byte for byte.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub config_sha256: String,
    pub outputs: Vec<ManifestEntry>,
    pub duration_seconds: f64,
}

/// Accumulates artifact files under one output directory and writes the
/// manifest last.
pub struct OutputSink {
    dir: PathBuf,
    command: String,
    seed: u64,
    config_digest: String,
    entries: Vec<ManifestEntry>,
    started: Instant,
}

impl OutputSink {
    pub fn new(dir: &str, command: &str, seed: u64, config_text: &str) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("cannot create output directory {dir}: {e}")))?;
        Ok(Self {
            dir: PathBuf::from(dir),
            command: command.to_string(),
            seed,
            config_digest: hex_digest(config_text.as_bytes()),
            entries: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_text(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        let path = self.path(name);
        std::fs::write(&path, content)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        self.entries.push(ManifestEntry {
            file: name.to_string(),
            sha256: hex_digest(content.as_bytes()),
            bytes: content.len(),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Write the manifest and report the artifact list.
    pub fn finish(self) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            seed: self.seed,
            config_sha256: self.config_digest,
            outputs: self.entries,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::io(format!("cannot serialize manifest: {e}")))?;
        let path = self.dir.join("run_manifest.json");
        std::fs::write(&path, text + "\n")
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        Ok(manifest)
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Minimal CSV builder: header plus numeric/string rows, full float
/// precision via the shortest round-trip formatting.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[CsvCell<'_>]) {
        assert_eq!(cells.len(), self.columns, "row width mismatch");
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            match cell {
                CsvCell::F(v) => {
                    if v.is_finite() {
                        self.text.push_str(&format!("{v}"));
                    } else {
                        self.text.push_str("nan");
                    }
                }
                CsvCell::I(v) => self.text.push_str(&format!("{v}")),
                CsvCell::S(v) => self.text.push_str(v),
            }
        }
        self.text.push('\n');
    }

    pub fn into_text(self) -> String {
        self.text
    }
}

pub enum CsvCell<'a> {
    F(f64),
    I(i64),
    S(&'a str),
}
