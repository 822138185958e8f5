use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{write_atomic, PipelineError};
use crate::stopwords::sha256_hex;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TIMINGS_FILE: &str = "timings.json";

/// Run record. Holds only values that are reproducible for a fixed config
/// and seed; wall-clock timings live in [`TIMINGS_FILE`] next to it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    /// Input name to SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output file (relative to the run directory) to SHA-256.
    pub outputs: BTreeMap<String, String>,
    pub counts: BTreeMap<String, u64>,
    pub stages_completed: Vec<String>,
    pub timings_file: String,
    /// SHA-256 over everything above.
    pub content_hash: String,
}

impl Manifest {
    pub fn load_or_default(dir: &Path) -> Result<Self, PipelineError> {
        let path = dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(&path).map_err(|e| PipelineError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| PipelineError::Corrupt {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn compute_hash(&self) -> String {
        let mut copy = self.clone();
        copy.content_hash.clear();
        sha256_hex(serde_json::to_string(&copy).expect("manifest serializes").as_bytes())
    }

    pub fn save(&mut self, dir: &Path) -> Result<(), PipelineError> {
        self.timings_file = TIMINGS_FILE.into();
        self.content_hash = self.compute_hash();
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
    }

    pub fn mark_stage(&mut self, stage: &str) {
        if !self.stages_completed.iter().any(|s| s == stage) {
            self.stages_completed.push(stage.to_string());
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    /// Seconds per stage, last run.
    pub stages: BTreeMap<String, f64>,
}

impl Timings {
    pub fn record(dir: &Path, stage: &str, seconds: f64) -> Result<(), PipelineError> {
        let path = dir.join(TIMINGS_FILE);
        let mut t: Timings = std::fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok())
            .unwrap_or_default();
        t.stages.insert(stage.to_string(), seconds);
        let text = serde_json::to_string_pretty(&t).expect("timings serialize");
        write_atomic(&path, text.as_bytes())
    }
}
