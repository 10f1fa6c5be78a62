//! Run manifests: every output file is accompanied by a JSON record of
//! the subcommand, the resolved configuration with all defaults
//! materialized, the input digest, and (for randomized runs) the
//! generator identity and master seed. Re-running a manifest reproduces
//! deterministic outputs byte for byte.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::io::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct PrngInfo {
    pub algorithm: &'static str,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prng: Option<PrngInfo>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        RunManifest {
            tool: "opdyn",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            input: None,
            input_digest: None,
            config: serde_json::Value::Null,
            prng: None,
            outputs: Vec::new(),
        }
    }

    pub fn with_input(mut self, path: &Path) -> Result<Self, CliError> {
        self.input = Some(path.display().to_string());
        self.input_digest = Some(crate::io::file_digest(path)?);
        Ok(self)
    }

    pub fn with_config(mut self, config: serde_json::Value) -> Self {
        self.config = config;
        self
    }

    pub fn with_prng(mut self, master_seed: u64) -> Self {
        self.prng = Some(PrngInfo {
            algorithm: opdyn_core::gossip::PRNG_IDENTITY,
            master_seed,
        });
        self
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Writes the manifest next to the primary output as
    /// `<stem>.manifest.json`.
    pub fn write_beside(&self, primary_output: &Path) -> Result<PathBuf, CliError> {
        let stem = primary_output
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("run");
        let path = primary_output.with_file_name(format!("{stem}.manifest.json"));
        write_json(&path, self)?;
        Ok(path)
    }
}
