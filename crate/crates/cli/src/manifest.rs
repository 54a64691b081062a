use std::path::Path;

use ontoenrich_core::{EnrichmentConfig, EnrichmentReport};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, path: &Path, contents: &[u8]) -> Self {
        InputDigest {
            role: role.to_string(),
            path: path.display().to_string(),
            bytes: contents.len(),
            sha256: format!("{:x}", Sha256::digest(contents)),
        }
    }
}

/// Provenance of a run. The worker count is left out of the recorded
/// config: it never changes results, and reports must compare equal
/// across `--jobs` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub clock: String,
    pub inputs: Vec<InputDigest>,
    pub config: serde_json::Value,
}

impl RunManifest {
    pub fn new(inputs: Vec<InputDigest>, config: &EnrichmentConfig, clock: String) -> Self {
        let mut config = serde_json::to_value(config).expect("config serializes");
        if let Some(map) = config.as_object_mut() {
            map.remove("jobs");
        }
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            clock,
            inputs,
            config,
        }
    }
}

/// Layout of `report.json`: the manifest next to the flattened report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub manifest: RunManifest,
    #[serde(flatten)]
    pub report: EnrichmentReport,
}

pub fn now() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .expect("current time formats")
}
