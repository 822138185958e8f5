use crate::stopwords::{language_probe_words, StopWords};

use super::CorpusError;

/// Label returned by the bundled classifier for anything it does not accept
/// as English.
pub const UNDETERMINED: &str = "und";

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub code: String,
    pub confidence: f64,
}

/// A language identifier. Implementations return their top label and a
/// confidence in `[0, 1]`.
pub trait LanguageClassifier: Send + Sync {
    fn classify(&self, text: &str) -> Detection;
}

pub fn detect_language(text: &str, classifier: &dyn LanguageClassifier) -> Result<Detection, CorpusError> {
    if text.trim().is_empty() {
        return Err(CorpusError::EmptyText);
    }
    let mut detection = classifier.classify(text);
    detection.confidence = detection.confidence.clamp(0.0, 1.0);
    Ok(detection)
}

/// Deterministic English detector used when no model-backed classifier is
/// configured.
///
/// Two scores are computed: the fraction of alphabetic characters that are in
/// the Latin script, and the fraction of whitespace tokens found in a bundled
/// list of 200 common English words. The text is labelled `"en"` iff both
/// strictly exceed their thresholds.
#[derive(Debug, Clone)]
pub struct HeuristicClassifier {
    pub latin_threshold: f64,
    pub stopword_threshold: f64,
    words: &'static StopWords,
}

impl Default for HeuristicClassifier {
    fn default() -> Self {
        Self::new(0.9, 0.02)
    }
}

impl HeuristicClassifier {
    pub fn new(latin_threshold: f64, stopword_threshold: f64) -> Self {
        Self {
            latin_threshold,
            stopword_threshold,
            words: language_probe_words(),
        }
    }

    pub fn latin_fraction(text: &str) -> f64 {
        let (mut letters, mut latin) = (0usize, 0usize);
        for c in text.chars().filter(|c| c.is_alphabetic()) {
            letters += 1;
            if is_latin_letter(c) {
                latin += 1;
            }
        }
        if letters == 0 {
            0.0
        } else {
            latin as f64 / letters as f64
        }
    }

    pub fn stopword_hit_rate(&self, text: &str) -> f64 {
        let (mut tokens, mut hits) = (0usize, 0usize);
        for raw in text.split_whitespace() {
            let token = raw
                .trim_matches(|c: char| !(c.is_alphanumeric() || c == '\''))
                .to_lowercase();
            if token.is_empty() {
                continue;
            }
            tokens += 1;
            if self.words.contains(&token) {
                hits += 1;
            }
        }
        if tokens == 0 {
            0.0
        } else {
            hits as f64 / tokens as f64
        }
    }
}

fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(c as u32, 0x00C0..=0x00FF | 0x0100..=0x024F | 0x1E00..=0x1EFF) && c != '\u{00D7}' && c != '\u{00F7}'
}

impl LanguageClassifier for HeuristicClassifier {
    fn classify(&self, text: &str) -> Detection {
        let latin = Self::latin_fraction(text);
        let hits = self.stopword_hit_rate(text);
        let english_score = latin * (hits / self.stopword_threshold).min(1.0);
        if latin > self.latin_threshold && hits > self.stopword_threshold {
            Detection {
                code: "en".to_string(),
                confidence: english_score,
            }
        } else {
            Detection {
                code: UNDETERMINED.to_string(),
                confidence: 1.0 - english_score,
            }
        }
    }
}
