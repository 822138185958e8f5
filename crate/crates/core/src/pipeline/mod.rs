//! Stage-file pipeline: every stage reads the previous stage's files from
//! the run directory and writes its own, atomically.
//!
//! | stage      | reads                                   | writes |
//! |------------|-----------------------------------------|--------|
//! | preprocess | input JSONL                             | `records.jsonl`, `documents.jsonl`, `drops.json` |
//! | embed      | `documents.jsonl` (+ EMB1 file)         | `embeddings.emb` |
//! | fit        | `documents.jsonl`, `embeddings.emb`     | `layout.csv`, `condensed_tree.json`, `assignments.csv`, `topics.csv`, `topic_labels.csv`, `dendrogram.json` |
//! | analyze    | `records.jsonl`, `documents.jsonl`, `assignments.csv` | `eda.json`, `win_matrix.csv`, `normalized_rates.csv`, `wr_bal.csv`, `coverage.csv`, `rankings.json`, `analysis.json` |
//! | report     | `analysis.json`, `dendrogram.json`, `topic_labels.csv` | `figures/*.svg` |
//!
//! `manifest.json` is updated after each stage.

mod config;
mod manifest;

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{self, AnalyticsReport};
use crate::corpus::{self, build_documents, ConversationRecord, Document, HeuristicClassifier, ParseMode};
use crate::embed::{self, hash_embed, load_embeddings, EmbeddingMatrix};
use crate::hdbscan::{self, TopicAssignment};
use crate::hierarchy::{self, Dendrogram};
use crate::report::{self, ChartData, RenderSpec};
use crate::stopwords::{english_stopwords, load_stopwords, sha256_hex};
use crate::topicrep;
use crate::umap;

pub use config::{EmbeddingSource, HierarchyConfig, LanguageConfig, PipelineConfig, TopicConfig};
pub use manifest::{Manifest, Timings, MANIFEST_FILE, TIMINGS_FILE};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const DOCUMENTS_FILE: &str = "documents.jsonl";
pub const DROPS_FILE: &str = "drops.json";
pub const EMBEDDINGS_FILE: &str = "embeddings.emb";
pub const LAYOUT_FILE: &str = "layout.csv";
pub const TREE_FILE: &str = "condensed_tree.json";
pub const ASSIGNMENTS_FILE: &str = "assignments.csv";
pub const TOPICS_FILE: &str = "topics.csv";
pub const TOPIC_LABELS_FILE: &str = "topic_labels.csv";
pub const DENDROGRAM_FILE: &str = "dendrogram.json";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const FIGURES_DIR: &str = "figures";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("missing stage input {path} ({hint})")]
    MissingInput { path: String, hint: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {reason}")]
    Corrupt { path: String, reason: String },
    #[error("embeddings do not match documents: {0}")]
    EmbeddingMismatch(String),
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Embed(#[from] embed::EmbedError),
    #[error(transparent)]
    Umap(#[from] umap::UmapError),
    #[error(transparent)]
    Hdbscan(#[from] hdbscan::HdbscanError),
    #[error(transparent)]
    TopicRep(#[from] topicrep::TopicRepError),
    #[error(transparent)]
    Analytics(#[from] analytics::AnalyticsError),
    #[error(transparent)]
    Report(#[from] report::ReportError),
}

impl PipelineError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    /// Short stable identifier for error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Config(_) => "config",
            PipelineError::MissingInput { .. } => "missing_input",
            PipelineError::Io { .. } => "io",
            PipelineError::Corrupt { .. } => "corrupt_input",
            PipelineError::EmbeddingMismatch(_) => "embedding_mismatch",
            PipelineError::Corpus(_) => "corpus",
            PipelineError::Embed(_) => "embed",
            PipelineError::Umap(_) => "umap",
            PipelineError::Hdbscan(_) => "hdbscan",
            PipelineError::TopicRep(_) => "topicrep",
            PipelineError::Analytics(_) => "analytics",
            PipelineError::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Preprocess,
    Embed,
    Fit,
    Analyze,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Preprocess,
        Stage::Embed,
        Stage::Fit,
        Stage::Analyze,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Preprocess => "preprocess",
            Stage::Embed => "embed",
            Stage::Fit => "fit",
            Stage::Analyze => "analyze",
            Stage::Report => "report",
        }
    }
}

/// Writes to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = BufWriter::new(File::create(&tmp).map_err(|e| PipelineError::io(&tmp, e))?);
        f.write_all(bytes).map_err(|e| PipelineError::io(&tmp, e))?;
        f.into_inner()
            .map_err(|e| PipelineError::io(&tmp, e))?
            .sync_all()
            .map_err(|e| PipelineError::io(&tmp, e))?;
    }
    std::fs::rename(&tmp, path).map_err(|e| PipelineError::io(path, e))
}

fn write_with<F>(path: &Path, fill: F) -> Result<(), PipelineError>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), PipelineError>,
{
    let mut buf = Vec::new();
    fill(&mut buf)?;
    write_atomic(path, &buf)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn require(dir: &Path, name: &str, needs: &'static str) -> Result<PathBuf, PipelineError> {
    let path = dir.join(name);
    if path.exists() {
        Ok(path)
    } else {
        Err(PipelineError::MissingInput {
            path: path.display().to_string(),
            hint: format!("run the {needs} stage first"),
        })
    }
}

fn open(path: &Path) -> Result<BufReader<File>, PipelineError> {
    Ok(BufReader::new(
        File::open(path).map_err(|e| PipelineError::io(path, e))?,
    ))
}

fn digest(path: &Path) -> Result<String, PipelineError> {
    Ok(sha256_hex(
        &std::fs::read(path).map_err(|e| PipelineError::io(path, e))?,
    ))
}

/// What a stage reports back for the manifest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageOutcome {
    pub counts: BTreeMap<String, u64>,
    pub outputs: Vec<String>,
    pub inputs: BTreeMap<String, String>,
}

impl StageOutcome {
    fn count(&mut self, key: &str, value: usize) {
        self.counts.insert(key.into(), value as u64);
    }
}

pub struct Pipeline {
    pub config: PipelineConfig,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        Ok(Self { config })
    }

    pub fn out_dir(&self) -> &Path {
        &self.config.output_dir
    }

    /// Runs one stage and folds its outcome into the manifest.
    pub fn run_stage(&self, stage: Stage) -> Result<StageOutcome, PipelineError> {
        let dir = self.out_dir();
        std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
        let started = Instant::now();
        log::info!("stage {} starting", stage.name());
        let outcome = match stage {
            Stage::Preprocess => self.preprocess()?,
            Stage::Embed => self.embed()?,
            Stage::Fit => self.fit()?,
            Stage::Analyze => self.analyze()?,
            Stage::Report => self.report()?,
        };
        let seconds = started.elapsed().as_secs_f64();
        log::info!("stage {} done in {seconds:.2}s", stage.name());

        let mut manifest = Manifest::load_or_default(dir)?;
        manifest.tool_version = env!("CARGO_PKG_VERSION").into();
        manifest.config_hash = self.config.content_hash();
        manifest.seed = self.config.seed;
        manifest.inputs.extend(outcome.inputs.clone());
        manifest.counts.extend(outcome.counts.clone());
        for name in &outcome.outputs {
            manifest.outputs.insert(name.clone(), digest(&dir.join(name))?);
        }
        manifest.mark_stage(stage.name());
        manifest.save(dir)?;
        Timings::record(dir, stage.name(), seconds)?;
        Ok(outcome)
    }

    pub fn run_all(&self) -> Result<(), PipelineError> {
        for stage in Stage::ALL {
            self.run_stage(stage)?;
        }
        Ok(())
    }

    fn preprocess(&self) -> Result<StageOutcome, PipelineError> {
        let c = &self.config;
        let dir = self.out_dir();
        if !c.input.exists() {
            return Err(PipelineError::MissingInput {
                path: c.input.display().to_string(),
                hint: "input file not found".into(),
            });
        }
        let mode = if c.strict {
            ParseMode::Strict
        } else {
            ParseMode::Lenient
        };
        let parsed = corpus::parse_dataset(open(&c.input)?, &c.schema, mode)?;
        let classifier = HeuristicClassifier::new(c.language.latin_threshold, c.language.stopword_threshold);
        let (docs, drops) = build_documents(&parsed.records, &c.preprocess, &classifier);

        write_with(&dir.join(RECORDS_FILE), |b| {
            Ok(corpus::write_jsonl(&parsed.records, b)?)
        })?;
        write_with(&dir.join(DOCUMENTS_FILE), |b| Ok(corpus::write_jsonl(&docs, b)?))?;
        write_json(
            &dir.join(DROPS_FILE),
            &serde_json::json!({ "parse": parsed.report, "filter": drops }),
        )?;

        let mut out = StageOutcome::default();
        out.inputs.insert("input".into(), digest(&c.input)?);
        out.count("records", parsed.records.len());
        out.count("malformed_lines", parsed.report.malformed.len());
        out.count("dropped", drops.total());
        out.count("documents", docs.len());
        out.outputs = vec![RECORDS_FILE.into(), DOCUMENTS_FILE.into(), DROPS_FILE.into()];
        Ok(out)
    }

    fn read_documents(&self) -> Result<Vec<Document>, PipelineError> {
        let path = require(self.out_dir(), DOCUMENTS_FILE, "preprocess")?;
        Ok(corpus::read_jsonl(open(&path)?)?)
    }

    fn embed(&self) -> Result<StageOutcome, PipelineError> {
        let docs = self.read_documents()?;
        let mut out = StageOutcome::default();
        let matrix = match &self.config.embedding {
            EmbeddingSource::Hash { dim, seed } => {
                let (m, empty) = hash_embed(&docs, *dim, *seed)?;
                if !empty.is_empty() {
                    log::warn!("{} documents produced no hash features", empty.len());
                }
                out.count("empty_embeddings", empty.len());
                m
            }
            EmbeddingSource::File { path } => {
                let all = load_embeddings(path)?;
                out.inputs.insert("embeddings".into(), digest(path)?);
                let order: Vec<String> = docs.iter().map(|d| d.doc_id.clone()).collect();
                all.select(&order)
                    .map_err(|e| PipelineError::EmbeddingMismatch(e.to_string()))?
            }
        };
        write_with(&self.out_dir().join(EMBEDDINGS_FILE), |b| {
            Ok(embed::write_embeddings(&matrix, b)?)
        })?;
        out.count("embedding_dim", matrix.dim());
        out.outputs = vec![EMBEDDINGS_FILE.into()];
        Ok(out)
    }

    fn stopwords(&self) -> Result<crate::stopwords::StopWords, PipelineError> {
        match &self.config.topics.stopwords_path {
            Some(p) => load_stopwords(p).map_err(|e| PipelineError::io(p, e)),
            None => Ok(english_stopwords().clone()),
        }
    }

    fn fit(&self) -> Result<StageOutcome, PipelineError> {
        let c = &self.config;
        let dir = self.out_dir();
        let docs = self.read_documents()?;
        let emb_path = require(dir, EMBEDDINGS_FILE, "embed")?;
        let matrix: EmbeddingMatrix = embed::read_embeddings(open(&emb_path)?)?;
        let ids_match = matrix.len() == docs.len() && matrix.ids().iter().zip(&docs).all(|(id, d)| *id == d.doc_id);
        if !ids_match {
            return Err(PipelineError::EmbeddingMismatch(format!(
                "{} rows for {} documents; rerun the embed stage",
                matrix.len(),
                docs.len()
            )));
        }
        let n = docs.len();
        if n < 3 {
            return Err(PipelineError::Umap(umap::UmapError::TooFewPoints { n, k: 2 }));
        }

        let mut params = c.umap_params();
        if params.n_neighbors >= n {
            log::warn!(
                "n_neighbors {} reduced to {} for {n} documents",
                params.n_neighbors,
                n - 1
            );
            params.n_neighbors = n - 1;
        }
        let (_, layout) = umap::fit(&matrix, &params)?;
        write_with(&dir.join(LAYOUT_FILE), |b| {
            Ok(umap::write_layout_csv(matrix.ids(), &layout, b)?)
        })?;

        let fit = hdbscan::cluster(&layout.coords, layout.dim, &c.hdbscan)?;
        let labels = &fit.assignment;
        let tree_json = serde_json::json!({
            "tree": fit.tree.to_json(),
            "selected_clusters": labels.selected_clusters,
            "min_samples": c.hdbscan.min_samples.clamp(1, n - 1),
        });
        write_json(&dir.join(TREE_FILE), &tree_json)?;
        write_with(&dir.join(ASSIGNMENTS_FILE), |b| {
            Ok(topicrep::write_assignments_csv(&docs, labels, b)?)
        })?;

        let mut model = topicrep::build_topic_model(&docs, labels, &self.stopwords()?, c.topics.top_n)?;
        if let Some(p) = &c.topics.labels_path {
            let overrides = topicrep::read_label_overrides(open(p)?)?;
            model.apply_labels(&overrides)?;
        }
        write_with(&dir.join(TOPICS_FILE), |b| {
            Ok(topicrep::write_topics_csv(&model, c.topics.top_n, b)?)
        })?;
        write_with(&dir.join(TOPIC_LABELS_FILE), |b| {
            Ok(topicrep::write_labels_csv(&model, b)?)
        })?;

        let centroids = hierarchy::topic_centroids(&model);
        let dendrogram = hierarchy::agglomerate(&centroids);
        let super_clusters = hierarchy::cut(&dendrogram, c.hierarchy.cut_threshold);
        write_json(
            &dir.join(DENDROGRAM_FILE),
            &serde_json::json!({
                "dendrogram": dendrogram,
                "degenerate_topics": centroids.degenerate,
                "cut_threshold": c.hierarchy.cut_threshold,
                "super_clusters": super_clusters,
            }),
        )?;

        let mut out = StageOutcome::default();
        out.count("topics", labels.n_topics);
        out.count("noise", labels.noise_count);
        out.count("layout_dim", layout.dim);
        out.count("empty_topics", model.empty_clusters.len());
        out.outputs = [
            LAYOUT_FILE,
            TREE_FILE,
            ASSIGNMENTS_FILE,
            TOPICS_FILE,
            TOPIC_LABELS_FILE,
            DENDROGRAM_FILE,
        ]
        .map(String::from)
        .to_vec();
        Ok(out)
    }

    fn read_assignment(&self, docs: &[Document]) -> Result<TopicAssignment, PipelineError> {
        let path = require(self.out_dir(), ASSIGNMENTS_FILE, "fit")?;
        let by_doc = topicrep::read_assignments_csv(open(&path)?)?;
        let labels: Vec<i32> = docs
            .iter()
            .map(|d| {
                by_doc.get(&d.doc_id).copied().ok_or_else(|| PipelineError::Corrupt {
                    path: path.display().to_string(),
                    reason: format!("no topic for document {}", d.doc_id),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(assignment_from_labels(labels))
    }

    fn analyze(&self) -> Result<StageOutcome, PipelineError> {
        let c = &self.config;
        let dir = self.out_dir();
        let records: Vec<ConversationRecord> = corpus::read_jsonl(open(&require(dir, RECORDS_FILE, "preprocess")?)?)?;
        let docs = self.read_documents()?;
        let labels = self.read_assignment(&docs)?;
        let doc_records: Vec<String> = docs.iter().map(|d| d.source_record.clone()).collect();
        let report = analytics::analyze(&records, &doc_records, &labels, &c.analytics)?;

        write_json(&dir.join("eda.json"), &report.eda)?;
        write_with(&dir.join("win_matrix.csv"), |b| {
            Ok(analytics::write_win_matrix_csv(&report.matrix, b)?)
        })?;
        write_with(&dir.join("normalized_rates.csv"), |b| {
            Ok(analytics::write_rates_csv(&report.rates, b)?)
        })?;
        write_with(&dir.join("wr_bal.csv"), |b| {
            Ok(analytics::write_balanced_csv(&report.balanced, b)?)
        })?;
        write_with(&dir.join("coverage.csv"), |b| {
            Ok(analytics::write_coverage_csv(&report.coverage, b)?)
        })?;
        write_json(&dir.join("rankings.json"), &analytics::rankings_json(&report.rankings))?;
        write_json(&dir.join(ANALYSIS_FILE), &report)?;

        let mut out = StageOutcome::default();
        out.count("joined_records", report.join.joined);
        out.count("unjoined_records", report.join.misses);
        out.outputs = [
            "eda.json",
            "win_matrix.csv",
            "normalized_rates.csv",
            "wr_bal.csv",
            "coverage.csv",
            "rankings.json",
            ANALYSIS_FILE,
        ]
        .map(String::from)
        .to_vec();
        Ok(out)
    }

    fn report(&self) -> Result<StageOutcome, PipelineError> {
        let dir = self.out_dir();
        let path = require(dir, ANALYSIS_FILE, "analyze")?;
        let analysis: AnalyticsReport = serde_json::from_reader(open(&path)?).map_err(|e| PipelineError::Corrupt {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let dendro_path = require(dir, DENDROGRAM_FILE, "fit")?;
        let dendro: DendrogramFile =
            serde_json::from_reader(open(&dendro_path)?).map_err(|e| PipelineError::Corrupt {
                path: dendro_path.display().to_string(),
                reason: e.to_string(),
            })?;
        let labels = read_topic_labels(&require(dir, TOPIC_LABELS_FILE, "fit")?)?;

        let specs = figure_specs(
            &analysis,
            &dendro.dendrogram,
            &labels,
            self.config.analytics.coverage_threshold,
        );
        let mut out = StageOutcome::default();
        for (name, spec) in specs {
            match report::render(&spec) {
                Ok(svg) => {
                    let rel = format!("{FIGURES_DIR}/{name}.svg");
                    write_atomic(&dir.join(&rel), svg.as_bytes())?;
                    out.outputs.push(rel);
                }
                Err(e) => log::warn!("skipping figure {name}: {e}"),
            }
        }
        out.count("figures", out.outputs.len());
        Ok(out)
    }
}

#[derive(Debug, Deserialize)]
struct DendrogramFile {
    dendrogram: Dendrogram,
}

/// Rebuilds a topic assignment from stored labels.
pub fn assignment_from_labels(labels: Vec<i32>) -> TopicAssignment {
    let n_topics = labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize);
    TopicAssignment {
        noise_count: labels.iter().filter(|&&l| l < 0).count(),
        selected_clusters: Vec::new(),
        n_topics,
        labels,
    }
}

fn read_topic_labels(path: &Path) -> Result<HashMap<usize, String>, PipelineError> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let mut out = HashMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| PipelineError::Corrupt {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        if let (Some(Ok(id)), Some(label)) = (row.get(0).map(str::parse::<usize>), row.get(1)) {
            out.insert(id, label.to_string());
        }
    }
    Ok(out)
}

fn topic_name(labels: &HashMap<usize, String>, topic: i32) -> String {
    match usize::try_from(topic).ok().and_then(|t| labels.get(&t)) {
        Some(l) => format!("T{topic} {l}"),
        None => format!("T{topic}"),
    }
}

/// The standard figure set, keyed by file stem.
pub fn figure_specs(
    a: &AnalyticsReport,
    dendrogram: &Dendrogram,
    labels: &HashMap<usize, String>,
    coverage_threshold: f64,
) -> Vec<(&'static str, RenderSpec)> {
    let eda = &a.eda;
    let mut specs = vec![
        (
            "model_frequency",
            RenderSpec::new(
                "Model appearances",
                ChartData::FreqBars {
                    labels: eda.model_frequency.iter().map(|m| m.0.clone()).collect(),
                    values: eda.model_frequency.iter().map(|m| m.1 as f64).collect(),
                },
            ),
        ),
        (
            "outcome_split",
            RenderSpec::new(
                "Outcome split (%)",
                ChartData::FreqBars {
                    labels: vec!["Model A wins".into(), "Model B wins".into(), "Tie".into()],
                    values: vec![
                        eda.outcome_split.model_a,
                        eda.outcome_split.model_b,
                        eda.outcome_split.tie,
                    ],
                },
            ),
        ),
    ];
    if let Some(lp) = eda.length_pref {
        specs.push((
            "length_preference",
            RenderSpec::new(
                "Winning response length (%)",
                ChartData::FreqBars {
                    labels: vec!["Shorter wins".into(), "Longer wins".into()],
                    values: vec![lp.shorter, lp.longer],
                },
            ),
        ));
    }
    specs.push((
        "topic_coverage",
        RenderSpec::new(
            "Cumulative topic coverage (%)",
            ChartData::CoverageBars {
                labels: a.coverage.iter().map(|c| format!("T{}", c.topic)).collect(),
                cumulative: a.coverage.iter().map(|c| c.cumulative).collect(),
                threshold: coverage_threshold,
            },
        ),
    ));
    let rows: Vec<String> = a.rates.topics.iter().map(|&t| topic_name(labels, t)).collect();
    specs.push((
        "win_rate_heatmap",
        RenderSpec::new(
            "Normalized win rate (%)",
            ChartData::Heatmap {
                rows: rows.clone(),
                cols: a.rates.models.clone(),
                values: a.rates.values.clone(),
            },
        ),
    ));
    specs.push((
        "topic_model_bars",
        RenderSpec::new(
            "Win rate per topic (%)",
            ChartData::GroupedBars {
                groups: rows,
                series: a.rates.models.clone(),
                values: a.rates.values.clone(),
            },
        ),
    ));
    specs.push((
        "balanced_win_rate",
        RenderSpec::new(
            "Balanced win rate (%)",
            ChartData::FreqBars {
                labels: a.balanced.iter().map(|b| b.model.clone()).collect(),
                values: a.balanced.iter().map(|b| b.wr_bal).collect(),
            },
        ),
    ));
    specs.push((
        "dendrogram",
        RenderSpec::new(
            "Topic hierarchy (average linkage, cosine distance)",
            ChartData::Dendrogram {
                dendrogram: dendrogram.clone(),
                labels: dendrogram
                    .leaves
                    .iter()
                    .map(|&t| topic_name(labels, t as i32))
                    .collect(),
            },
        ),
    ));
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested/out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert!(!dir.path().join("nested/.out.txt.tmp").exists());
    }

    #[test]
    fn fit_without_embeddings_is_a_missing_input() {
        let dir = tempfile::tempdir().unwrap();
        let config = PipelineConfig {
            output_dir: dir.path().to_path_buf(),
            ..Default::default()
        };
        std::fs::write(dir.path().join(DOCUMENTS_FILE), "").unwrap();
        let p = Pipeline::new(config).unwrap();
        let err = p.run_stage(Stage::Fit).unwrap_err();
        assert_eq!(err.kind(), "missing_input");
        assert!(err.to_string().contains("embed"));
    }

    #[test]
    fn labels_round_trip_to_assignment() {
        let a = assignment_from_labels(vec![0, -1, 1, 0]);
        assert_eq!((a.n_topics, a.noise_count), (2, 1));
        assert_eq!(assignment_from_labels(vec![-1, -1]).n_topics, 0);
    }
}
