use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::analytics::AnalyticsParams;
use crate::corpus::{PreprocessConfig, SchemaConfig};
use crate::embed::DEFAULT_DIM;
use crate::hdbscan::HdbscanParams;
use crate::stopwords::sha256_hex;
use crate::umap::UmapParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LanguageConfig {
    pub latin_threshold: f64,
    pub stopword_threshold: f64,
}

impl Default for LanguageConfig {
    fn default() -> Self {
        Self {
            latin_threshold: 0.9,
            stopword_threshold: 0.02,
        }
    }
}

/// Where document vectors come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmbeddingSource {
    /// Deterministic signed feature hashing of the document text.
    Hash { dim: usize, seed: u64 },
    /// Precomputed EMB1 file whose ids cover every document.
    File { path: PathBuf },
}

impl Default for EmbeddingSource {
    fn default() -> Self {
        EmbeddingSource::Hash {
            dim: DEFAULT_DIM,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicConfig {
    pub top_n: usize,
    /// One word per line; the bundled English list when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopwords_path: Option<PathBuf>,
    /// `topic_id,label` CSV with curated topic names.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels_path: Option<PathBuf>,
}

impl Default for TopicConfig {
    fn default() -> Self {
        Self {
            top_n: 10,
            stopwords_path: None,
            labels_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HierarchyConfig {
    /// Cosine distance below which topics share a super-cluster.
    pub cut_threshold: f64,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        Self { cut_threshold: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    /// Layout seed; `--seed` overrides it.
    pub seed: u64,
    /// Abort on the first malformed input line.
    pub strict: bool,
    pub schema: SchemaConfig,
    pub language: LanguageConfig,
    pub preprocess: PreprocessConfig,
    pub embedding: EmbeddingSource,
    pub umap: UmapParams,
    pub hdbscan: HdbscanParams,
    pub topics: TopicConfig,
    pub hierarchy: HierarchyConfig,
    pub analytics: AnalyticsParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("conversations.jsonl"),
            output_dir: PathBuf::from("out"),
            seed: 42,
            strict: false,
            schema: SchemaConfig::default(),
            language: LanguageConfig::default(),
            preprocess: PreprocessConfig::default(),
            embedding: EmbeddingSource::default(),
            umap: UmapParams::default(),
            hdbscan: HdbscanParams::default(),
            topics: TopicConfig::default(),
            hierarchy: HierarchyConfig::default(),
            analytics: AnalyticsParams::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let config: Self = toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Hash of the settings that affect results; the output directory is
    /// left out so reruns elsewhere compare equal.
    pub fn content_hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        sha256_hex(c.to_toml().as_bytes())
    }

    pub fn umap_params(&self) -> UmapParams {
        UmapParams {
            seed: self.seed,
            ..self.umap.clone()
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        let u = &self.umap;
        if u.n_neighbors < 2 {
            return bad(format!("umap.n_neighbors must be >= 2, got {}", u.n_neighbors));
        }
        if u.n_components < 2 {
            return bad(format!("umap.n_components must be >= 2, got {}", u.n_components));
        }
        if !(u.min_dist >= 0.0 && u.spread > 0.0 && u.min_dist <= 3.0 * u.spread) {
            return bad(format!(
                "umap.min_dist/spread out of range: {} / {}",
                u.min_dist, u.spread
            ));
        }
        if u.epochs == 0 {
            return bad("umap.epochs must be >= 1".into());
        }
        let h = &self.hdbscan;
        if h.min_samples == 0 {
            return bad("hdbscan.min_samples must be >= 1".into());
        }
        if matches!(h.min_cluster_size, Some(m) if m < 2) {
            return bad("hdbscan.min_cluster_size must be >= 2".into());
        }
        if self.topics.top_n == 0 {
            return bad("topics.top_n must be >= 1".into());
        }
        if let EmbeddingSource::Hash { dim, .. } = self.embedding {
            if dim <= u.n_components {
                return bad(format!(
                    "embedding.dim {dim} must exceed umap.n_components {}",
                    u.n_components
                ));
            }
        }
        let a = &self.analytics;
        if !(0.0..=100.0).contains(&a.coverage_threshold) {
            return bad(format!(
                "analytics.coverage_threshold must be in [0, 100], got {}",
                a.coverage_threshold
            ));
        }
        if a.top_k_topics == 0 || a.top_m_models == 0 {
            return bad("analytics.top_k_topics and top_m_models must be >= 1".into());
        }
        let l = &self.language;
        if !((0.0..=1.0).contains(&l.latin_threshold) && (0.0..=1.0).contains(&l.stopword_threshold)) {
            return bad("language thresholds must be in [0, 1]".into());
        }
        if self.hierarchy.cut_threshold.is_nan() || self.hierarchy.cut_threshold < 0.0 {
            return bad("hierarchy.cut_threshold must be >= 0".into());
        }
        Ok(())
    }
}
