//! Run manifests: everything needed to regenerate a run directory.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const MANIFEST_SCHEMA: &str = "manifest/v1";
pub const TOOL: &str = "fragsim";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: String,
    pub tool: String,
    pub tool_version: String,
    /// Canonical config text; `fragsim run --config manifest.json` reads it.
    pub config: String,
    pub config_sha256: String,
    pub master_seed: u64,
    pub realization_count: u64,
    pub realizations: Vec<RealizationRecord>,
    pub artifacts: Vec<Artifact>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationRecord {
    pub index: u64,
    /// Stream seed, `mix_seed(master_seed, index)`.
    pub seed: u64,
    pub clock: f64,
    pub events: u64,
    pub fragments: u64,
    pub interfaces: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub rows: u64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(CliError::io(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingArtifact(path.to_path_buf()),
        _ => CliError::io(path)(e),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::malformed(path, e.to_string()))
}
