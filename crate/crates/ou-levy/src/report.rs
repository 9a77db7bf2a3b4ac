//! Versioned JSON report envelope.

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::io::sha256_hex;

pub const SCHEMA_VERSION: u32 = 1;

/// Field excluded when comparing reports from repeated runs.
pub const TIMESTAMP_FIELD: &str = "generated_at";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema_version: u32,
    pub command: String,
    pub generated_at: String,
    pub master_seed: u64,
    /// SHA-256 of the canonical JSON of `config`.
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: &ExperimentConfig, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            master_seed: config.run.master_seed,
            config_hash: config_hash(config),
            config: config.clone(),
            result,
        }
    }
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    sha256_hex(&serde_json::to_vec(config).expect("config serializes"))
}

/// The report with its timestamp removed, for byte comparison.
pub fn strip_timestamp(json: &str) -> Result<String, serde_json::Error> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove(TIMESTAMP_FIELD);
    }
    serde_json::to_string_pretty(&v)
}
