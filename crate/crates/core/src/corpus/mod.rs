//! Comparison-log parsing and prompt preprocessing.

mod language;
mod normalize;
mod parse;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use language::{detect_language, Detection, HeuristicClassifier, LanguageClassifier, UNDETERMINED};
pub use normalize::{is_normalized_document_text, normalize_text};
pub use parse::{parse_dataset, parse_str, MalformedLine, ParseMode, ParseReport, ParsedDataset, SchemaConfig};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: unknown winner value {value:?}")]
    UnknownWinnerValue { line: usize, value: String },
    #[error("text is empty")]
    EmptyText,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    ModelA,
    ModelB,
    Tie,
}

impl Winner {
    pub fn is_decisive(self) -> bool {
        !matches!(self, Winner::Tie)
    }
}

/// One pairwise comparison with its human preference label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversationRecord {
    pub record_id: String,
    pub model_a: String,
    pub model_b: String,
    pub winner: Winner,
    /// All turns of side A (prompts and responses), newline-joined.
    pub text_a: String,
    pub text_b: String,
    /// User turns only, newline-joined.
    pub prompt_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
    pub token_estimate: usize,
    pub source_record: String,
}

/// Which text of a conversation becomes the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentUnit {
    #[default]
    Prompts,
    /// Both sides' full conversations (prompts and responses).
    PromptsAndResponses,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    pub document_unit: DocumentUnit,
    /// Normalized prompts equal (case-insensitively) to one of these are
    /// dropped. Empty by default.
    pub stop_prompts: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    NonEnglish,
    EmptyAfterCleaning,
    StopPrompt,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DropReport {
    pub counts: BTreeMap<DropReason, usize>,
    pub dropped_records: BTreeMap<DropReason, Vec<String>>,
}

impl DropReport {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, reason: DropReason) -> usize {
        self.counts.get(&reason).copied().unwrap_or(0)
    }

    fn add(&mut self, reason: DropReason, record_id: &str) {
        *self.counts.entry(reason).or_default() += 1;
        self.dropped_records
            .entry(reason)
            .or_default()
            .push(record_id.to_string());
    }
}

enum Outcome {
    Kept(Document),
    Dropped(DropReason),
}

/// Turns records into English documents, one per kept record, in input order.
///
/// Language is detected on the prompt with URLs removed and whitespace
/// collapsed but before ASCII stripping, since stripping would erase
/// non-Latin scripts entirely. A prompt with nothing left at that point, or
/// whose fully normalized document text is empty, is dropped as empty.
pub fn build_documents(
    records: &[ConversationRecord],
    config: &PreprocessConfig,
    classifier: &dyn LanguageClassifier,
) -> (Vec<Document>, DropReport) {
    let stop_prompts: Vec<String> = config
        .stop_prompts
        .iter()
        .map(|s| normalize_text(s).to_lowercase())
        .collect();

    let outcomes: Vec<Outcome> = records
        .par_iter()
        .map(|record| process_record(record, config, &stop_prompts, classifier))
        .collect();

    let mut documents = Vec::with_capacity(records.len());
    let mut report = DropReport::default();
    for (record, outcome) in records.iter().zip(outcomes) {
        match outcome {
            Outcome::Kept(doc) => documents.push(doc),
            Outcome::Dropped(reason) => report.add(reason, &record.record_id),
        }
    }
    (documents, report)
}

fn process_record(
    record: &ConversationRecord,
    config: &PreprocessConfig,
    stop_prompts: &[String],
    classifier: &dyn LanguageClassifier,
) -> Outcome {
    let probe = normalize::language_probe(&record.prompt_text);
    match detect_language(&probe, classifier) {
        Err(_) => return Outcome::Dropped(DropReason::EmptyAfterCleaning),
        Ok(d) if d.code != "en" => return Outcome::Dropped(DropReason::NonEnglish),
        Ok(_) => {}
    }
    let prompt = normalize_text(&record.prompt_text);
    if prompt.is_empty() {
        return Outcome::Dropped(DropReason::EmptyAfterCleaning);
    }
    if stop_prompts.contains(&prompt.to_lowercase()) {
        return Outcome::Dropped(DropReason::StopPrompt);
    }
    let text = match config.document_unit {
        DocumentUnit::Prompts => prompt,
        DocumentUnit::PromptsAndResponses => normalize_text(&format!("{}\n{}", record.text_a, record.text_b)),
    };
    if text.is_empty() {
        return Outcome::Dropped(DropReason::EmptyAfterCleaning);
    }
    Outcome::Kept(Document {
        doc_id: record.record_id.clone(),
        token_estimate: text.split(' ').count(),
        text,
        source_record: record.record_id.clone(),
    })
}

pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], mut writer: W) -> Result<(), CorpusError> {
    for item in items {
        serde_json::to_writer(&mut writer, item)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(reader: R) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
