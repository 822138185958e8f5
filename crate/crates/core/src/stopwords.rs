//! Bundled word lists.
//!
//! Both lists are shipped as plain text (one word per line) and their SHA-256
//! digests are pinned so tokenization stays reproducible across builds.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

/// 318-word English stop-list used when tokenizing topic documents.
pub const ENGLISH_STOPWORDS_TXT: &str = include_str!("../data/english_stopwords.txt");
pub const ENGLISH_STOPWORDS_SHA256: &str = "4e22be0ad71ae1c41dd7a8f944e851ead671d114edf4faad1ee8c698d2ba5084";

/// 200 high-frequency English function words used by the fallback language
/// classifier.
pub const LANGUAGE_PROBE_TXT: &str = include_str!("../data/language_probe_words.txt");
pub const LANGUAGE_PROBE_SHA256: &str = "d502d1f64599edeb4fa0f7a7534bab6b3414f605ecbb42b80c99843cfbd8865d";

pub type StopWords = HashSet<String>;

fn parse_list(text: &str) -> StopWords {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn english_stopwords() -> &'static StopWords {
    static LIST: OnceLock<StopWords> = OnceLock::new();
    LIST.get_or_init(|| parse_list(ENGLISH_STOPWORDS_TXT))
}

pub fn language_probe_words() -> &'static StopWords {
    static LIST: OnceLock<StopWords> = OnceLock::new();
    LIST.get_or_init(|| parse_list(LANGUAGE_PROBE_TXT))
}

/// Reads a custom stop-list file: one word per line, `#` comments allowed.
pub fn load_stopwords(path: &Path) -> std::io::Result<StopWords> {
    Ok(parse_list(&std::fs::read_to_string(path)?))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
