//! Preference statistics over comparison records and topic labels.
//!
//! Everything here is integer counting followed by a single division, so
//! results do not depend on record order.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ConversationRecord, Winner};
use crate::hdbscan::TopicAssignment;

/// Row id used for noise documents.
pub const NOISE_TOPIC: i32 = -1;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("no records")]
    NoRecords,
    #[error("no labeled (non-noise) documents")]
    NoTopics,
    #[error("empty selection: {0}")]
    EmptySelection(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn pct(part: u64, whole: u64) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64 * 100.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSplit {
    pub model_a: f64,
    pub model_b: f64,
    pub tie: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthPreference {
    pub shorter: f64,
    pub longer: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthCounts {
    pub shorter_won: u64,
    pub longer_won: u64,
    /// Decisive records whose two responses have the same length.
    pub equal_length: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaSummary {
    pub n_records: usize,
    pub model_frequency: Vec<(String, u64)>,
    pub outcome_counts: [u64; 3],
    pub outcome_split: OutcomeSplit,
    pub length_counts: LengthCounts,
    /// `None` when no decisive record has responses of different length.
    pub length_pref: Option<LengthPreference>,
}

/// Appearances per model (both sides of every record), most frequent
/// first, ties by name.
pub fn model_frequency(records: &[ConversationRecord]) -> Vec<(String, u64)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for r in records {
        *counts.entry(&r.model_a).or_default() += 1;
        *counts.entry(&r.model_b).or_default() += 1;
    }
    let mut out: Vec<(String, u64)> = counts.into_iter().map(|(m, c)| (m.to_string(), c)).collect();
    out.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    out
}

/// Outcome split over all records and length preference over decisive ones,
/// comparing character counts of the two responses.
pub fn eda_summary(records: &[ConversationRecord]) -> Result<EdaSummary, AnalyticsError> {
    if records.is_empty() {
        return Err(AnalyticsError::NoRecords);
    }
    let mut outcome = [0u64; 3];
    let mut lengths = LengthCounts::default();
    for r in records {
        let (len_a, len_b) = (r.text_a.chars().count(), r.text_b.chars().count());
        let (winner_len, loser_len) = match r.winner {
            Winner::ModelA => {
                outcome[0] += 1;
                (len_a, len_b)
            }
            Winner::ModelB => {
                outcome[1] += 1;
                (len_b, len_a)
            }
            Winner::Tie => {
                outcome[2] += 1;
                continue;
            }
        };
        match winner_len.cmp(&loser_len) {
            std::cmp::Ordering::Less => lengths.shorter_won += 1,
            std::cmp::Ordering::Greater => lengths.longer_won += 1,
            std::cmp::Ordering::Equal => lengths.equal_length += 1,
        }
    }
    let n = records.len() as u64;
    let compared = lengths.shorter_won + lengths.longer_won;
    Ok(EdaSummary {
        n_records: records.len(),
        model_frequency: model_frequency(records),
        outcome_counts: outcome,
        outcome_split: OutcomeSplit {
            model_a: pct(outcome[0], n),
            model_b: pct(outcome[1], n),
            tie: pct(outcome[2], n),
        },
        length_counts: lengths,
        length_pref: (compared > 0).then(|| LengthPreference {
            shorter: pct(lengths.shorter_won, compared),
            longer: pct(lengths.longer_won, compared),
        }),
    })
}

/// Topic x model tallies. Row `-1` collects comparisons whose document was
/// labeled noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinMatrix {
    pub topics: Vec<i32>,
    pub models: Vec<String>,
    pub wins: Vec<u64>,
    pub ties: Vec<u64>,
    pub appearances: Vec<u64>,
}

impl WinMatrix {
    fn idx(&self, t: usize, m: usize) -> usize {
        t * self.models.len() + m
    }

    pub fn topic_row(&self, topic: i32) -> Option<usize> {
        self.topics.iter().position(|&t| t == topic)
    }

    pub fn model_col(&self, model: &str) -> Option<usize> {
        self.models.binary_search_by(|m| m.as_str().cmp(model)).ok()
    }

    pub fn wins(&self, topic: i32, model: &str) -> u64 {
        self.cell(&self.wins, topic, model)
    }

    pub fn ties(&self, topic: i32, model: &str) -> u64 {
        self.cell(&self.ties, topic, model)
    }

    pub fn appearances(&self, topic: i32, model: &str) -> u64 {
        self.cell(&self.appearances, topic, model)
    }

    fn cell(&self, data: &[u64], topic: i32, model: &str) -> u64 {
        match (self.topic_row(topic), self.model_col(model)) {
            (Some(t), Some(m)) => data[self.idx(t, m)],
            _ => 0,
        }
    }

    /// Column sums over every row, noise included.
    pub fn model_totals(&self) -> Vec<(String, u64, u64)> {
        self.models
            .iter()
            .enumerate()
            .map(|(m, name)| {
                let (w, a) = (0..self.topics.len()).fold((0, 0), |(w, a), t| {
                    (w + self.wins[self.idx(t, m)], a + self.appearances[self.idx(t, m)])
                });
                (name.clone(), w, a)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinReport {
    pub joined: usize,
    pub misses: usize,
    pub missing_records: Vec<String>,
}

/// Tallies every record whose id has a label in `record_topics`.
///
/// Rows are `-1` followed by `0..n_topics`, so topics without comparisons
/// still get an all-zero row. Models are sorted by name.
pub fn win_matrix(
    records: &[ConversationRecord],
    record_topics: &HashMap<String, i32>,
    n_topics: usize,
) -> (WinMatrix, JoinReport) {
    let mut models: Vec<String> = records
        .iter()
        .flat_map(|r| [r.model_a.clone(), r.model_b.clone()])
        .collect();
    models.sort();
    models.dedup();
    let topics: Vec<i32> = std::iter::once(NOISE_TOPIC).chain(0..n_topics as i32).collect();
    let cells = topics.len() * models.len();
    let mut m = WinMatrix {
        topics,
        models,
        wins: vec![0; cells],
        ties: vec![0; cells],
        appearances: vec![0; cells],
    };
    let mut report = JoinReport::default();
    for r in records {
        let Some(&topic) = record_topics.get(&r.record_id) else {
            report.misses += 1;
            report.missing_records.push(r.record_id.clone());
            continue;
        };
        let Some(t) = m.topic_row(topic) else {
            report.misses += 1;
            report.missing_records.push(r.record_id.clone());
            continue;
        };
        report.joined += 1;
        let a = m.idx(t, m.model_col(&r.model_a).expect("model listed"));
        let b = m.idx(t, m.model_col(&r.model_b).expect("model listed"));
        m.appearances[a] += 1;
        m.appearances[b] += 1;
        match r.winner {
            Winner::ModelA => m.wins[a] += 1,
            Winner::ModelB => m.wins[b] += 1,
            Winner::Tie => {
                m.ties[a] += 1;
                m.ties[b] += 1;
            }
        }
    }
    report.missing_records.sort();
    (m, report)
}

/// Maps record ids to their document's topic label.
pub fn record_topics(doc_records: &[String], labels: &TopicAssignment) -> HashMap<String, i32> {
    doc_records.iter().cloned().zip(labels.labels.iter().copied()).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Each topic row sums to 100 over the selected models.
    #[default]
    PerTopic,
    /// Each model column sums to 100 over the selected topics.
    PerModel,
    /// The whole selected block sums to 100.
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub topics: Vec<i32>,
    pub models: Vec<String>,
    pub normalization: Normalization,
    /// Row-major percentages.
    pub values: Vec<f64>,
    /// Topics whose selected wins are all zero (rows left at zero).
    pub zero_rows: Vec<i32>,
}

impl RateTable {
    pub fn get(&self, topic: i32, model: &str) -> Option<f64> {
        let t = self.topics.iter().position(|&x| x == topic)?;
        let m = self.models.iter().position(|x| x == model)?;
        Some(self.values[t * self.models.len() + m])
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.models.len()..(t + 1) * self.models.len()]
    }
}

pub fn normalized_win_rates(
    matrix: &WinMatrix,
    topics: &[i32],
    models: &[String],
    normalization: Normalization,
) -> Result<RateTable, AnalyticsError> {
    if topics.is_empty() {
        return Err(AnalyticsError::EmptySelection("topics"));
    }
    if models.is_empty() {
        return Err(AnalyticsError::EmptySelection("models"));
    }
    let (nt, nm) = (topics.len(), models.len());
    let wins: Vec<u64> = topics
        .iter()
        .flat_map(|&t| models.iter().map(move |m| (t, m)))
        .map(|(t, m)| matrix.wins(t, m))
        .collect();
    let row_sum = |t: usize| wins[t * nm..(t + 1) * nm].iter().sum::<u64>();
    let col_sum = |m: usize| (0..nt).map(|t| wins[t * nm + m]).sum::<u64>();
    let all: u64 = wins.iter().sum();
    let values = (0..nt * nm)
        .map(|i| {
            let (t, m) = (i / nm, i % nm);
            let denom = match normalization {
                Normalization::PerTopic => row_sum(t),
                Normalization::PerModel => col_sum(m),
                Normalization::Global => all,
            };
            pct(wins[i], denom)
        })
        .collect();
    let zero_rows = (0..nt).filter(|&t| row_sum(t) == 0).map(|t| topics[t]).collect();
    Ok(RateTable {
        topics: topics.to_vec(),
        models: models.to_vec(),
        normalization,
        values,
        zero_rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancedRate {
    pub model: String,
    pub wins: u64,
    pub appearances: u64,
    pub wr_bal: f64,
}

/// Total wins over total appearances per model, for models with at least
/// `min_appearances`. Sorted by rate descending, then name.
pub fn balanced_win_rate(matrix: &WinMatrix, min_appearances: u64) -> Vec<BalancedRate> {
    let mut out: Vec<BalancedRate> = matrix
        .model_totals()
        .into_iter()
        .filter(|(_, _, a)| *a > 0 && *a >= min_appearances)
        .map(|(model, wins, appearances)| BalancedRate {
            wr_bal: pct(wins, appearances),
            model,
            wins,
            appearances,
        })
        .collect();
    out.sort_by(|x, y| y.wr_bal.total_cmp(&x.wr_bal).then_with(|| x.model.cmp(&y.model)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub rank: usize,
    pub topic: i32,
    pub size: usize,
    pub share: f64,
    pub cumulative: f64,
}

/// Largest `k` topics with their share of non-noise documents.
pub fn cumulative_coverage(labels: &TopicAssignment, k: usize) -> Result<Vec<CoverageRow>, AnalyticsError> {
    let sizes = labels.topic_sizes();
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return Err(AnalyticsError::NoTopics);
    }
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]).then(x.cmp(&y)));
    let mut running = 0usize;
    Ok(order
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(rank, t)| {
            running += sizes[t];
            CoverageRow {
                rank: rank + 1,
                topic: t as i32,
                size: sizes[t],
                share: pct(sizes[t] as u64, total as u64),
                cumulative: pct(running as u64, total as u64),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel {
    pub model: String,
    pub win_share: f64,
    pub wins: u64,
    pub appearances: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicRanking {
    pub topic: i32,
    pub ranked: Vec<RankedModel>,
    /// The topic has comparisons but no decisive ones.
    pub all_ties: bool,
}

/// Per non-noise topic, the top `n` models by share of the topic's wins
/// among models with at least `min_appearances` there. Ties go to more
/// appearances, then name.
pub fn topic_rankings(matrix: &WinMatrix, n: usize, min_appearances: u64) -> Vec<TopicRanking> {
    let nm = matrix.models.len();
    matrix
        .topics
        .iter()
        .enumerate()
        .filter(|(_, &t)| t != NOISE_TOPIC)
        .map(|(ti, &topic)| {
            let row = ti * nm..(ti + 1) * nm;
            let total: u64 = matrix.wins[row.clone()].iter().sum();
            let seen: u64 = matrix.appearances[row].iter().sum();
            let mut ranked: Vec<RankedModel> = if total == 0 {
                Vec::new()
            } else {
                (0..nm)
                    .filter(|&m| matrix.appearances[ti * nm + m] >= min_appearances.max(1))
                    .map(|m| RankedModel {
                        model: matrix.models[m].clone(),
                        win_share: pct(matrix.wins[ti * nm + m], total),
                        wins: matrix.wins[ti * nm + m],
                        appearances: matrix.appearances[ti * nm + m],
                    })
                    .collect()
            };
            ranked.sort_by(|x, y| {
                y.wins
                    .cmp(&x.wins)
                    .then(y.appearances.cmp(&x.appearances))
                    .then_with(|| x.model.cmp(&y.model))
            });
            ranked.truncate(n);
            TopicRanking {
                topic,
                ranked,
                all_ties: total == 0 && seen > 0,
            }
        })
        .collect()
}

/// Most frequent `m` models, for heatmap and bar selections.
pub fn top_models(matrix: &WinMatrix, m: usize) -> Vec<String> {
    let mut totals = matrix.model_totals();
    totals.sort_by(|x, y| y.2.cmp(&x.2).then_with(|| x.0.cmp(&y.0)));
    totals.into_iter().take(m).map(|t| t.0).collect()
}

/// Everything the analyze stage writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticsReport {
    pub eda: EdaSummary,
    pub matrix: WinMatrix,
    pub join: JoinReport,
    pub rates: RateTable,
    pub balanced: Vec<BalancedRate>,
    pub coverage: Vec<CoverageRow>,
    pub rankings: Vec<TopicRanking>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticsParams {
    pub top_k_topics: usize,
    pub top_m_models: usize,
    pub min_appearances: u64,
    pub ranking_size: usize,
    pub coverage_threshold: f64,
    pub normalization: Normalization,
}

impl Default for AnalyticsParams {
    fn default() -> Self {
        Self {
            top_k_topics: 10,
            top_m_models: 5,
            min_appearances: 20,
            ranking_size: 5,
            coverage_threshold: 82.0,
            normalization: Normalization::PerTopic,
        }
    }
}

pub fn analyze(
    records: &[ConversationRecord],
    doc_records: &[String],
    labels: &TopicAssignment,
    params: &AnalyticsParams,
) -> Result<AnalyticsReport, AnalyticsError> {
    let eda = eda_summary(records)?;
    let (matrix, join) = win_matrix(records, &record_topics(doc_records, labels), labels.n_topics);
    if join.misses > 0 {
        log::info!("{} records have no labeled document", join.misses);
    }
    let coverage = cumulative_coverage(labels, params.top_k_topics)?;
    let topics: Vec<i32> = coverage.iter().map(|c| c.topic).collect();
    let models = top_models(&matrix, params.top_m_models);
    let rates = normalized_win_rates(&matrix, &topics, &models, params.normalization)?;
    Ok(AnalyticsReport {
        eda,
        balanced: balanced_win_rate(&matrix, 1),
        rankings: topic_rankings(&matrix, params.ranking_size, params.min_appearances),
        matrix,
        join,
        rates,
        coverage,
    })
}

fn csv_err(e: csv::Error) -> AnalyticsError {
    AnalyticsError::Io(std::io::Error::other(e))
}

/// Long format: `topic_id,model,wins,ties,appearances`.
pub fn write_win_matrix_csv<W: Write>(m: &WinMatrix, writer: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["topic_id", "model", "wins", "ties", "appearances"])
        .map_err(csv_err)?;
    for (t, topic) in m.topics.iter().enumerate() {
        for (mi, model) in m.models.iter().enumerate() {
            let i = m.idx(t, mi);
            w.write_record([
                topic.to_string(),
                model.clone(),
                m.wins[i].to_string(),
                m.ties[i].to_string(),
                m.appearances[i].to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Wide format: `topic_id,<model>...`.
pub fn write_rates_csv<W: Write>(r: &RateTable, writer: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["topic_id".to_string()];
    header.extend(r.models.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (t, topic) in r.topics.iter().enumerate() {
        let mut row = vec![topic.to_string()];
        row.extend(r.row(t).iter().map(|v| format!("{v:?}")));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_balanced_csv<W: Write>(rows: &[BalancedRate], writer: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["model", "wins", "appearances", "wr_bal"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.model.clone(),
            r.wins.to_string(),
            r.appearances.to_string(),
            format!("{:?}", r.wr_bal),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coverage_csv<W: Write>(rows: &[CoverageRow], writer: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["rank", "topic_id", "size", "share_pct", "cumulative_pct"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.rank.to_string(),
            r.topic.to_string(),
            r.size.to_string(),
            format!("{:?}", r.share),
            format!("{:?}", r.cumulative),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn rankings_json(rankings: &[TopicRanking]) -> serde_json::Value {
    serde_json::json!({ "topics": rankings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, a: &str, b: &str, winner: Winner, len_a: usize, len_b: usize) -> ConversationRecord {
        ConversationRecord {
            record_id: id.into(),
            model_a: a.into(),
            model_b: b.into(),
            winner,
            text_a: "x".repeat(len_a),
            text_b: "y".repeat(len_b),
            prompt_text: "p".into(),
            declared_language: None,
        }
    }

    #[test]
    fn outcome_split_and_length() {
        let rs = vec![
            rec("1", "m1", "m2", Winner::ModelA, 1, 5),
            rec("2", "m1", "m2", Winner::ModelA, 2, 5),
            rec("3", "m1", "m2", Winner::ModelB, 5, 9),
            rec("4", "m1", "m2", Winner::Tie, 1, 1),
        ];
        let s = eda_summary(&rs).unwrap();
        assert_eq!(
            s.outcome_split,
            OutcomeSplit {
                model_a: 50.0,
                model_b: 25.0,
                tie: 25.0
            }
        );
        let lp = s.length_pref.unwrap();
        assert!((lp.shorter - 200.0 / 3.0).abs() < 1e-12 && (lp.longer - 100.0 / 3.0).abs() < 1e-12);
        assert!(eda_summary(&[]).is_err());
    }

    #[test]
    fn length_pref_three_of_four() {
        let rs = vec![
            rec("1", "a", "b", Winner::ModelA, 1, 2),
            rec("2", "a", "b", Winner::ModelB, 2, 1),
            rec("3", "a", "b", Winner::ModelA, 3, 4),
            rec("4", "a", "b", Winner::ModelA, 4, 3),
            rec("5", "a", "b", Winner::ModelA, 3, 3),
        ];
        let s = eda_summary(&rs).unwrap();
        assert_eq!(
            s.length_pref,
            Some(LengthPreference {
                shorter: 75.0,
                longer: 25.0
            })
        );
        assert_eq!(s.length_counts.equal_length, 1);
    }

    #[test]
    fn frequency_counts_both_sides() {
        let rs = vec![
            rec("1", "m1", "m2", Winner::Tie, 0, 0),
            rec("2", "m1", "m3", Winner::Tie, 0, 0),
        ];
        assert_eq!(
            model_frequency(&rs),
            vec![("m1".into(), 2), ("m2".into(), 1), ("m3".into(), 1)]
        );
        let same = vec![rec("1", "m1", "m1", Winner::Tie, 0, 0)];
        assert_eq!(model_frequency(&same), vec![("m1".into(), 2)]);
        assert!(model_frequency(&[]).is_empty());
    }

    fn topics_of(pairs: &[(&str, i32)]) -> HashMap<String, i32> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn win_matrix_tallies() {
        let rs = vec![
            rec("1", "m1", "m2", Winner::ModelA, 0, 0),
            rec("2", "m2", "m1", Winner::ModelB, 0, 0),
            rec("3", "m1", "m2", Winner::Tie, 0, 0),
            rec("4", "m1", "m2", Winner::ModelA, 0, 0),
            rec("5", "m1", "m2", Winner::ModelA, 0, 0),
        ];
        let (m, join) = win_matrix(&rs, &topics_of(&[("1", 0), ("2", 0), ("3", 0), ("4", -1)]), 2);
        assert_eq!((m.wins(0, "m1"), m.appearances(0, "m1"), m.ties(0, "m1")), (2, 3, 1));
        assert_eq!(m.wins(-1, "m1"), 1);
        assert_eq!(m.appearances(1, "m1"), 0);
        assert_eq!(join.misses, 1);
        assert_eq!(join.missing_records, vec!["5"]);
    }

    #[test]
    fn per_topic_rows() {
        let rs = vec![
            rec("1", "m1", "m2", Winner::ModelA, 0, 0),
            rec("2", "m1", "m2", Winner::ModelB, 0, 0),
            rec("3", "m1", "m2", Winner::ModelA, 0, 0),
            rec("4", "m1", "m2", Winner::Tie, 0, 0),
        ];
        let (m, _) = win_matrix(&rs, &topics_of(&[("1", 0), ("2", 0), ("3", 1), ("4", 2)]), 3);
        let models = vec!["m1".to_string(), "m2".to_string()];
        let r = normalized_win_rates(&m, &[0, 1, 2], &models, Normalization::PerTopic).unwrap();
        assert_eq!(r.row(0), &[50.0, 50.0]);
        assert_eq!(r.row(1), &[100.0, 0.0]);
        assert_eq!(r.row(2), &[0.0, 0.0]);
        assert_eq!(r.zero_rows, vec![2]);
        let g = normalized_win_rates(&m, &[0, 1], &models, Normalization::Global).unwrap();
        assert!((g.values.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        let c = normalized_win_rates(&m, &[0, 1], &models, Normalization::PerModel).unwrap();
        assert_eq!(c.get(0, "m1"), Some(50.0));
        assert_eq!(c.get(0, "m2"), Some(100.0));
        assert!(normalized_win_rates(&m, &[], &models, Normalization::PerTopic).is_err());
    }

    #[test]
    fn balanced_rates() {
        let rs = vec![
            rec("1", "m1", "m2", Winner::ModelA, 0, 0),
            rec("2", "m1", "m2", Winner::ModelA, 0, 0),
            rec("3", "m1", "m2", Winner::ModelA, 0, 0),
            rec("4", "m1", "m2", Winner::Tie, 0, 0),
        ];
        let (m, _) = win_matrix(&rs, &topics_of(&[("1", 0), ("2", 0), ("3", 0), ("4", 0)]), 1);
        let b = balanced_win_rate(&m, 1);
        assert_eq!((b[0].model.as_str(), b[0].wr_bal), ("m1", 75.0));
        assert_eq!((b[1].model.as_str(), b[1].wr_bal), ("m2", 0.0));
        assert!(balanced_win_rate(&m, 5).is_empty());
    }

    fn assignment(sizes: &[usize], noise: usize) -> TopicAssignment {
        let mut labels = Vec::new();
        for (t, &s) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat_n(t as i32, s));
        }
        labels.extend(std::iter::repeat_n(-1, noise));
        TopicAssignment {
            n_topics: sizes.len(),
            noise_count: noise,
            selected_clusters: (0..sizes.len()).collect(),
            labels,
        }
    }

    #[test]
    fn coverage() {
        let a = assignment(&[50, 30, 20], 7);
        let c = cumulative_coverage(&a, 2).unwrap();
        assert_eq!(c[1].cumulative, 80.0);
        let all = cumulative_coverage(&a, 3).unwrap();
        assert_eq!(all[2].cumulative, 100.0);
        assert_eq!(cumulative_coverage(&a, 9).unwrap().len(), 3);
        assert!(cumulative_coverage(&assignment(&[], 3), 2).is_err());
    }

    #[test]
    fn rankings() {
        let mut rs = Vec::new();
        let mut n = 0;
        let mut add = |rs: &mut Vec<ConversationRecord>, a: &str, b: &str, w: Winner, count: usize| {
            for _ in 0..count {
                n += 1;
                rs.push(rec(&n.to_string(), a, b, w, 0, 0));
            }
        };
        add(&mut rs, "m1", "m4", Winner::ModelA, 5);
        add(&mut rs, "m2", "m4", Winner::ModelA, 3);
        add(&mut rs, "m3", "m4", Winner::ModelA, 2);
        let topics: HashMap<String, i32> = rs.iter().map(|r| (r.record_id.clone(), 0)).collect();
        let (m, _) = win_matrix(&rs, &topics, 1);
        let r = topic_rankings(&m, 2, 1);
        let got: Vec<_> = r[0].ranked.iter().map(|x| (x.model.as_str(), x.win_share)).collect();
        assert_eq!(got, vec![("m1", 50.0), ("m2", 30.0)]);
    }

    #[test]
    fn ranking_tie_prefers_more_appearances() {
        let rs = vec![
            rec("1", "m1", "m3", Winner::ModelA, 0, 0),
            rec("2", "m1", "m3", Winner::ModelA, 0, 0),
            rec("3", "m2", "m3", Winner::ModelA, 0, 0),
            rec("4", "m2", "m3", Winner::ModelA, 0, 0),
            rec("5", "m2", "m3", Winner::Tie, 0, 0),
            rec("6", "m4", "m5", Winner::Tie, 0, 0),
        ];
        let mut topics: HashMap<String, i32> = rs.iter().map(|r| (r.record_id.clone(), 0)).collect();
        topics.insert("6".into(), 1);
        let (m, _) = win_matrix(&rs, &topics, 2);
        let r = topic_rankings(&m, 5, 1);
        assert_eq!(r[0].ranked[0].model, "m2");
        assert_eq!(r[0].ranked[1].model, "m1");
        assert!(r[1].ranked.is_empty() && r[1].all_ties);
    }
}
