use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{ConversationRecord, CorpusError, Winner};

/// Maps logical record fields to the key names used by a source dump.
///
/// The defaults match the public arena comparison dumps: `question_id`,
/// `model_a`, `model_b`, `winner`, and `conversation_a`/`conversation_b` as
/// arrays of `{"role", "content"}` turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemaConfig {
    pub record_id: String,
    pub model_a: String,
    pub model_b: String,
    pub winner: String,
    pub conversation_a: String,
    pub conversation_b: String,
    pub language: String,
    pub role_key: String,
    pub content_key: String,
    pub user_role: String,
    pub winner_a_values: Vec<String>,
    pub winner_b_values: Vec<String>,
    /// Everything that is neither an A nor a B win, e.g. "both bad" votes.
    pub tie_values: Vec<String>,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        Self {
            record_id: "question_id".into(),
            model_a: "model_a".into(),
            model_b: "model_b".into(),
            winner: "winner".into(),
            conversation_a: "conversation_a".into(),
            conversation_b: "conversation_b".into(),
            language: "language".into(),
            role_key: "role".into(),
            content_key: "content".into(),
            user_role: "user".into(),
            winner_a_values: vec!["model_a".into()],
            winner_b_values: vec!["model_b".into()],
            tie_values: vec!["tie".into(), "tie (bothbad)".into(), "both_bad".into()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseMode {
    /// Malformed lines are skipped and reported.
    #[default]
    Lenient,
    /// The first malformed line aborts parsing.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MalformedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParseReport {
    pub lines_read: usize,
    pub records: usize,
    pub malformed: Vec<MalformedLine>,
    /// Raw winner labels and how often each occurred.
    pub winner_labels: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedDataset {
    pub records: Vec<ConversationRecord>,
    pub report: ParseReport,
}

/// Parses a JSONL comparison dump. Line numbers in reports are 1-based; blank
/// lines are ignored.
pub fn parse_dataset<R: BufRead>(
    reader: R,
    schema: &SchemaConfig,
    mode: ParseMode,
) -> Result<ParsedDataset, CorpusError> {
    let mut out = ParsedDataset::default();
    let mut seen_ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        out.report.lines_read += 1;
        match parse_line(&line, line_no, schema) {
            Ok((record, label)) => {
                if !seen_ids.insert(record.record_id.clone()) {
                    let err = CorpusError::MalformedLine {
                        line: line_no,
                        reason: format!("duplicate record id {:?}", record.record_id),
                    };
                    skip_or_fail(err, mode, &mut out.report)?;
                    continue;
                }
                *out.report.winner_labels.entry(label).or_default() += 1;
                out.records.push(record);
            }
            Err(err @ CorpusError::UnknownWinnerValue { .. }) => return Err(err),
            Err(err) => skip_or_fail(err, mode, &mut out.report)?,
        }
    }
    out.report.records = out.records.len();
    Ok(out)
}

pub fn parse_str(text: &str, schema: &SchemaConfig, mode: ParseMode) -> Result<ParsedDataset, CorpusError> {
    parse_dataset(text.as_bytes(), schema, mode)
}

fn skip_or_fail(err: CorpusError, mode: ParseMode, report: &mut ParseReport) -> Result<(), CorpusError> {
    match (mode, err) {
        (ParseMode::Lenient, CorpusError::MalformedLine { line, reason }) => {
            log::warn!("skipping line {line}: {reason}");
            report.malformed.push(MalformedLine { line, reason });
            Ok(())
        }
        (_, err) => Err(err),
    }
}

fn parse_line(line: &str, line_no: usize, schema: &SchemaConfig) -> Result<(ConversationRecord, String), CorpusError> {
    let malformed = |reason: String| CorpusError::MalformedLine { line: line_no, reason };
    let value: Value = serde_json::from_str(line).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| malformed("line is not a JSON object".into()))?;

    let model_a = required_str(obj, &schema.model_a).map_err(&malformed)?;
    let model_b = required_str(obj, &schema.model_b).map_err(&malformed)?;
    let label = required_str(obj, &schema.winner).map_err(&malformed)?;
    let winner = if schema.winner_a_values.contains(&label) {
        Winner::ModelA
    } else if schema.winner_b_values.contains(&label) {
        Winner::ModelB
    } else if schema.tie_values.contains(&label) {
        Winner::Tie
    } else {
        return Err(CorpusError::UnknownWinnerValue {
            line: line_no,
            value: label,
        });
    };

    let turns_a = turns(obj, &schema.conversation_a, schema).map_err(&malformed)?;
    let turns_b = turns(obj, &schema.conversation_b, schema).map_err(&malformed)?;
    let prompt_text = turns_a
        .iter()
        .filter(|(role, _)| role == &schema.user_role)
        .map(|(_, content)| content.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let join_all = |ts: &[(String, String)]| ts.iter().map(|(_, c)| c.as_str()).collect::<Vec<_>>().join("\n");

    let record_id = match obj.get(&schema.record_id) {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => format!("line-{line_no}"),
    };
    let declared_language = obj.get(&schema.language).and_then(Value::as_str).map(str::to_string);

    Ok((
        ConversationRecord {
            record_id,
            model_a,
            model_b,
            winner,
            text_a: join_all(&turns_a),
            text_b: join_all(&turns_b),
            prompt_text,
            declared_language,
        },
        label,
    ))
}

fn required_str(obj: &Map<String, Value>, key: &str) -> Result<String, String> {
    match obj.get(key) {
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
        Some(Value::String(_)) => Err(format!("field {key:?} is empty")),
        Some(_) => Err(format!("field {key:?} is not a string")),
        None => Err(format!("missing field {key:?}")),
    }
}

fn turns(obj: &Map<String, Value>, key: &str, schema: &SchemaConfig) -> Result<Vec<(String, String)>, String> {
    let arr = match obj.get(key) {
        Some(Value::Array(a)) => a,
        Some(_) => return Err(format!("field {key:?} is not an array of turns")),
        None => return Err(format!("missing field {key:?}")),
    };
    arr.iter()
        .enumerate()
        .map(|(i, turn)| {
            let role = turn.get(&schema.role_key).and_then(Value::as_str);
            let content = turn.get(&schema.content_key).and_then(Value::as_str);
            match (role, content) {
                (Some(r), Some(c)) => Ok((r.to_string(), c.to_string())),
                _ => Err(format!("turn {i} of {key:?} lacks role/content strings")),
            }
        })
        .collect()
}
