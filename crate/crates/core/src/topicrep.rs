//! Class-based TF-IDF keywords per topic.
//!
//! All documents of a topic are pooled into one bag of words. For word `w`
//! in topic `c`:
//!
//! - `TF(c, w) = f(w, c) / total(c)`
//! - `IDF(w) = ln(1 + A / f(w))`, where `A` is the mean token count per topic
//!   and `f(w)` the count of `w` over all topics
//! - `s(c, w) = TF(c, w) * IDF(w)`
//!
//! Noise documents (label `-1`) are left out of every count.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::Document;
use crate::hdbscan::TopicAssignment;
use crate::stopwords::StopWords;

/// Number of keywords joined into an automatic topic label.
pub const LABEL_KEYWORDS: usize = 4;

#[derive(Debug, Error)]
pub enum TopicRepError {
    #[error("{documents} documents but {labels} labels")]
    LabelMismatch { documents: usize, labels: usize },
    #[error("label override for unknown topic {0}")]
    UnknownTopic(i64),
    #[error("malformed label file: {0}")]
    BadLabelFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Lowercases, splits on runs of non-alphanumeric characters and drops
/// tokens shorter than two characters, pure digits and stop words.
pub fn tokenize(text: &str, stopwords: &StopWords) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .filter(|t| !t.chars().all(|c| c.is_ascii_digit()))
        .filter(|t| !stopwords.contains(*t))
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenCounts {
    /// Sorted vocabulary; a word's column is its position.
    pub vocabulary: Vec<String>,
    /// Sparse `f(w, c)` keyed by column, one map per topic.
    pub per_cluster: Vec<BTreeMap<usize, u64>>,
    pub cluster_totals: Vec<u64>,
    pub word_totals: Vec<u64>,
    /// Mean token count per topic (`A`).
    pub avg_words: f64,
    /// Topics left with no tokens after filtering.
    pub empty_clusters: Vec<usize>,
}

impl TokenCounts {
    pub fn n_clusters(&self) -> usize {
        self.per_cluster.len()
    }

    pub fn column(&self, word: &str) -> Option<usize> {
        self.vocabulary.binary_search_by(|w| w.as_str().cmp(word)).ok()
    }

    pub fn count(&self, cluster: usize, word: &str) -> u64 {
        self.column(word)
            .and_then(|col| self.per_cluster[cluster].get(&col).copied())
            .unwrap_or(0)
    }
}

/// Tallies tokens per topic over `labels.n_topics` topics.
pub fn count_by_cluster(
    documents: &[Document],
    labels: &TopicAssignment,
    stopwords: &StopWords,
) -> Result<TokenCounts, TopicRepError> {
    if documents.len() != labels.labels.len() {
        return Err(TopicRepError::LabelMismatch {
            documents: documents.len(),
            labels: labels.labels.len(),
        });
    }
    let n_topics = labels.n_topics;
    let tokenized: Vec<Vec<String>> = documents
        .par_iter()
        .zip(labels.labels.par_iter())
        .map(|(doc, &label)| {
            if label < 0 {
                Vec::new()
            } else {
                tokenize(&doc.text, stopwords)
            }
        })
        .collect();

    let mut by_word: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for (tokens, &label) in tokenized.iter().zip(&labels.labels) {
        if label < 0 {
            continue;
        }
        for t in tokens {
            by_word.entry(t.as_str()).or_insert_with(|| vec![0; n_topics])[label as usize] += 1;
        }
    }

    let mut vocabulary = Vec::with_capacity(by_word.len());
    let mut per_cluster = vec![BTreeMap::new(); n_topics];
    let mut cluster_totals = vec![0u64; n_topics];
    let mut word_totals = Vec::with_capacity(by_word.len());
    for (col, (word, counts)) in by_word.into_iter().enumerate() {
        vocabulary.push(word.to_string());
        word_totals.push(counts.iter().sum());
        for (c, &f) in counts.iter().enumerate() {
            if f > 0 {
                per_cluster[c].insert(col, f);
                cluster_totals[c] += f;
            }
        }
    }
    let avg_words = if n_topics == 0 {
        0.0
    } else {
        cluster_totals.iter().sum::<u64>() as f64 / n_topics as f64
    };
    let empty_clusters = (0..n_topics).filter(|&c| cluster_totals[c] == 0).collect();
    Ok(TokenCounts {
        vocabulary,
        per_cluster,
        cluster_totals,
        word_totals,
        avg_words,
        empty_clusters,
    })
}

/// Dense `C x |V|` score matrix, row-major.
pub fn ctfidf(counts: &TokenCounts) -> Vec<f64> {
    let v = counts.vocabulary.len();
    let idf: Vec<f64> = counts
        .word_totals
        .iter()
        .map(|&f| (1.0 + counts.avg_words / f as f64).ln())
        .collect();
    let mut scores = vec![0.0; counts.n_clusters() * v];
    for (c, row) in counts.per_cluster.iter().enumerate() {
        let total = counts.cluster_totals[c] as f64;
        for (&col, &f) in row {
            scores[c * v + col] = f as f64 / total * idf[col];
        }
    }
    scores
}

/// Highest-scoring terms of one score row: descending score, ties by
/// ascending term, zero scores omitted.
pub fn top_terms(row: &[f64], vocabulary: &[String], top_n: usize) -> Vec<(String, f64)> {
    let mut ranked: Vec<(usize, f64)> = row
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0.0)
        .map(|(i, &s)| (i, s))
        .collect();
    // vocabulary is sorted, so column order is term order
    ranked.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    ranked
        .into_iter()
        .take(top_n)
        .map(|(i, s)| (vocabulary[i].clone(), s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicModel {
    pub vocabulary: Vec<String>,
    /// Row-major `n_topics x vocabulary.len()`.
    pub scores: Vec<f64>,
    pub keywords: Vec<Vec<(String, f64)>>,
    pub labels: Vec<String>,
    pub sizes: Vec<usize>,
    pub empty_clusters: Vec<usize>,
}

impl TopicModel {
    pub fn n_topics(&self) -> usize {
        self.keywords.len()
    }

    pub fn score_row(&self, topic: usize) -> &[f64] {
        let v = self.vocabulary.len();
        &self.scores[topic * v..(topic + 1) * v]
    }

    /// Replaces automatic labels with curated names where given.
    pub fn apply_labels(&mut self, overrides: &BTreeMap<usize, String>) -> Result<(), TopicRepError> {
        for (&topic, label) in overrides {
            let slot = self
                .labels
                .get_mut(topic)
                .ok_or(TopicRepError::UnknownTopic(topic as i64))?;
            *slot = label.clone();
        }
        Ok(())
    }
}

/// Keywords joined by underscores, or `topic_<id>` when there are none.
pub fn auto_label(topic: usize, keywords: &[(String, f64)]) -> String {
    if keywords.is_empty() {
        return format!("topic_{topic}");
    }
    keywords
        .iter()
        .take(LABEL_KEYWORDS)
        .map(|(t, _)| t.as_str())
        .collect::<Vec<_>>()
        .join("_")
}

pub fn build_topic_model(
    documents: &[Document],
    labels: &TopicAssignment,
    stopwords: &StopWords,
    top_n: usize,
) -> Result<TopicModel, TopicRepError> {
    let counts = count_by_cluster(documents, labels, stopwords)?;
    for &c in &counts.empty_clusters {
        log::warn!("topic {c} has no tokens after stop-word filtering");
    }
    let scores = ctfidf(&counts);
    let v = counts.vocabulary.len();
    let keywords: Vec<_> = (0..counts.n_clusters())
        .map(|c| top_terms(&scores[c * v..(c + 1) * v], &counts.vocabulary, top_n))
        .collect();
    let labels_out = keywords.iter().enumerate().map(|(c, k)| auto_label(c, k)).collect();
    Ok(TopicModel {
        vocabulary: counts.vocabulary,
        scores,
        keywords,
        labels: labels_out,
        sizes: labels.topic_sizes(),
        empty_clusters: counts.empty_clusters,
    })
}

/// Reads `topic_id,label` rows (header required).
pub fn read_label_overrides<R: Read>(reader: R) -> Result<BTreeMap<usize, String>, TopicRepError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = BTreeMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| TopicRepError::BadLabelFile(e.to_string()))?;
        let (Some(id), Some(label)) = (row.get(0), row.get(1)) else {
            return Err(TopicRepError::BadLabelFile(format!("short row {row:?}")));
        };
        let id: i64 = id
            .trim()
            .parse()
            .map_err(|_| TopicRepError::BadLabelFile(format!("bad topic id {id:?}")))?;
        let id = usize::try_from(id).map_err(|_| TopicRepError::UnknownTopic(id))?;
        out.insert(id, label.trim().to_string());
    }
    Ok(out)
}

/// `topic_id,size,keyword_1..keyword_n,score_1..score_n`; short keyword
/// lists leave trailing cells empty.
pub fn write_topics_csv<W: Write>(model: &TopicModel, top_n: usize, writer: W) -> Result<(), TopicRepError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["topic_id".to_string(), "size".to_string()];
    header.extend((1..=top_n).map(|i| format!("keyword_{i}")));
    header.extend((1..=top_n).map(|i| format!("score_{i}")));
    w.write_record(&header).map_err(csv_err)?;
    for (t, kw) in model.keywords.iter().enumerate() {
        let mut row = vec![t.to_string(), model.sizes.get(t).copied().unwrap_or(0).to_string()];
        row.extend((0..top_n).map(|i| kw.get(i).map(|k| k.0.clone()).unwrap_or_default()));
        row.extend((0..top_n).map(|i| kw.get(i).map(|k| format!("{:?}", k.1)).unwrap_or_default()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `topic_id,label`.
pub fn write_labels_csv<W: Write>(model: &TopicModel, writer: W) -> Result<(), TopicRepError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["topic_id", "label"]).map_err(csv_err)?;
    for (t, label) in model.labels.iter().enumerate() {
        w.write_record([t.to_string(), label.clone()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `doc_id,topic_id`.
pub fn write_assignments_csv<W: Write>(
    documents: &[Document],
    labels: &TopicAssignment,
    writer: W,
) -> Result<(), TopicRepError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["doc_id", "topic_id"]).map_err(csv_err)?;
    for (doc, label) in documents.iter().zip(&labels.labels) {
        w.write_record([doc.doc_id.clone(), label.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `doc_id,topic_id` rows back into a map.
pub fn read_assignments_csv<R: Read>(reader: R) -> Result<HashMap<String, i32>, TopicRepError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = HashMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| TopicRepError::BadLabelFile(e.to_string()))?;
        let id = row.get(0).unwrap_or_default().to_string();
        let topic = row
            .get(1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| TopicRepError::BadLabelFile(format!("bad row {row:?}")))?;
        out.insert(id, topic);
    }
    Ok(out)
}

fn csv_err(e: csv::Error) -> TopicRepError {
    TopicRepError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stopwords::english_stopwords;
    use proptest::prelude::*;

    fn doc(i: usize, text: &str) -> Document {
        Document {
            doc_id: format!("d{i}"),
            text: text.into(),
            token_estimate: 0,
            source_record: format!("d{i}"),
        }
    }

    fn assignment(labels: Vec<i32>) -> TopicAssignment {
        let n_topics = labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize);
        TopicAssignment {
            noise_count: labels.iter().filter(|&&l| l < 0).count(),
            selected_clusters: (0..n_topics).collect(),
            n_topics,
            labels,
        }
    }

    fn fixture() -> TokenCounts {
        let docs = vec![doc(0, "apple apple banana"), doc(1, "car car banana")];
        count_by_cluster(&docs, &assignment(vec![0, 1]), english_stopwords()).unwrap()
    }

    #[test]
    fn tokenize_examples() {
        let sw = english_stopwords();
        assert_eq!(tokenize("The cat sat on the mat", sw), vec!["cat", "sat", "mat"]);
        assert_eq!(
            tokenize("SELECT * FROM users2", &StopWords::new()),
            vec!["select", "from", "users2"]
        );
        assert!(tokenize("a I 7", sw).is_empty());
        assert_eq!(tokenize("v2 42 x", sw), vec!["v2"]);
    }

    #[test]
    fn fixture_counts() {
        let c = fixture();
        assert_eq!(c.vocabulary, vec!["apple", "banana", "car"]);
        assert_eq!(c.count(0, "apple"), 2);
        assert_eq!((c.count(0, "banana"), c.count(1, "banana")), (1, 1));
        assert_eq!(c.avg_words, 3.0);
        assert_eq!(c.word_totals, vec![2, 2, 2]);
    }

    #[test]
    fn fixture_scores() {
        let c = fixture();
        let s = ctfidf(&c);
        assert!((s[0] - 0.6108604879161034).abs() < 1e-12);
        assert!((s[1] - 0.3054302439580517).abs() < 1e-12);
        assert_eq!(s[2], 0.0);
        assert_eq!(top_terms(&s[0..3], &c.vocabulary, 1)[0].0, "apple");
        assert_eq!(top_terms(&s[3..6], &c.vocabulary, 1)[0].0, "car");
    }

    #[test]
    fn single_word_cluster_scores_ln2() {
        let c = count_by_cluster(&[doc(0, "xx xx")], &assignment(vec![0]), english_stopwords()).unwrap();
        assert!((ctfidf(&c)[0] - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn noise_excluded_and_duplicates_double() {
        let docs = vec![doc(0, "zebra"), doc(1, "zebra"), doc(2, "lion")];
        let c = count_by_cluster(&docs, &assignment(vec![0, 0, -1]), english_stopwords()).unwrap();
        assert_eq!(c.vocabulary, vec!["zebra"]);
        assert_eq!(c.count(0, "zebra"), 2);
    }

    #[test]
    fn all_noise_gives_empty_model() {
        let docs = vec![doc(0, "zebra")];
        let model = build_topic_model(&docs, &assignment(vec![-1]), english_stopwords(), 10).unwrap();
        assert_eq!(model.n_topics(), 0);
        assert!(model.scores.is_empty());
    }

    #[test]
    fn empty_cluster_recorded() {
        let docs = vec![doc(0, "zebra"), doc(1, "the of")];
        let model = build_topic_model(&docs, &assignment(vec![0, 1]), english_stopwords(), 10).unwrap();
        assert_eq!(model.empty_clusters, vec![1]);
        assert!(model.keywords[1].is_empty());
        assert_eq!(model.labels, vec!["zebra", "topic_1"]);
    }

    #[test]
    fn ties_sorted_alphabetically() {
        let vocab: Vec<String> = ["b", "a", "c"].iter().map(|s| s.to_string()).collect();
        let mut sorted = vocab.clone();
        sorted.sort();
        let top = top_terms(&[0.5, 0.5, 0.0], &sorted, 10);
        assert_eq!(top, vec![("a".to_string(), 0.5), ("b".to_string(), 0.5)]);
    }

    #[test]
    fn labels_and_overrides() {
        let docs = vec![doc(0, "alpha beta gamma delta epsilon alpha"), doc(1, "omega")];
        let mut model = build_topic_model(&docs, &assignment(vec![0, 1]), english_stopwords(), 10).unwrap();
        assert_eq!(model.labels[0], "alpha_beta_delta_epsilon");
        let overrides = read_label_overrides("topic_id,label\n1,Greek endings\n".as_bytes()).unwrap();
        model.apply_labels(&overrides).unwrap();
        assert_eq!(model.labels[1], "Greek endings");
        let bad = read_label_overrides("topic_id,label\n9,x\n".as_bytes()).unwrap();
        assert!(model.apply_labels(&bad).is_err());
    }

    #[test]
    fn csv_outputs() {
        let docs = vec![doc(0, "apple apple banana"), doc(1, "car car banana")];
        let labels = assignment(vec![0, 1]);
        let model = build_topic_model(&docs, &labels, english_stopwords(), 2).unwrap();
        let mut out = Vec::new();
        write_topics_csv(&model, 2, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "topic_id,size,keyword_1,keyword_2,score_1,score_2"
        );
        assert!(text.contains("0,1,apple,banana,0.6108604879161034,0.3054302439580517"));
        let mut out = Vec::new();
        write_assignments_csv(&docs, &labels, &mut out).unwrap();
        let back = read_assignments_csv(out.as_slice()).unwrap();
        assert_eq!(back["d1"], 1);
    }

    proptest! {
        #[test]
        fn tf_rows_sum_to_one(words in proptest::collection::vec((0usize..3, "[a-e]{2}"), 1..60)) {
            let docs: Vec<Document> = words.iter().enumerate().map(|(i, (_, w))| doc(i, w)).collect();
            let labels = assignment(words.iter().map(|(c, _)| *c as i32).collect());
            let c = count_by_cluster(&docs, &labels, &StopWords::new()).unwrap();
            for (row, &total) in c.per_cluster.iter().zip(&c.cluster_totals) {
                if total > 0 {
                    let tf: f64 = row.values().map(|&f| f as f64 / total as f64).sum();
                    prop_assert!((tf - 1.0).abs() < 1e-9);
                }
            }
            for (col, &fw) in c.word_totals.iter().enumerate() {
                let sum: u64 = c.per_cluster.iter().map(|r| r.get(&col).copied().unwrap_or(0)).sum();
                prop_assert_eq!(sum, fw);
            }
            let s = ctfidf(&c);
            let v = c.vocabulary.len();
            for (ci, row) in c.per_cluster.iter().enumerate() {
                for col in 0..v {
                    prop_assert_eq!(s[ci * v + col] > 0.0, row.contains_key(&col));
                }
            }
        }
    }
}
