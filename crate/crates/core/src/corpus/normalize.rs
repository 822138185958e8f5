use std::sync::OnceLock;

use regex::Regex;

fn url_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(https?://|www\.)\S*").expect("static regex"))
}

fn normalize_pass(raw: &str) -> String {
    // 1. URLs
    let without_urls = url_pattern().replace_all(raw, "");
    // 2-3. printable 7-bit only (whitespace survives until step 4), no backslashes
    let ascii: String = without_urls
        .chars()
        .filter(|&c| matches!(c, ' '..='~' | '\t' | '\n' | '\r') && c != '\\')
        .collect();
    // 4-5. collapse whitespace runs, trim
    ascii.split_ascii_whitespace().collect::<Vec<_>>().join(" ")
}

/// Cleans raw prompt text into a printable-ASCII, single-spaced string.
///
/// Each pass applies, in order: URL removal, deletion of everything outside
/// printable 7-bit ASCII, backslash removal, whitespace collapsing and
/// trimming. Deleting characters can splice a new URL or backslash-free
/// sequence together (`"ww😀w.x"`), so passes repeat until the text is
/// stable. Every pass that changes the text shortens it, so this terminates.
pub fn normalize_text(raw: &str) -> String {
    let mut current = normalize_pass(raw);
    loop {
        let next = normalize_pass(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// URL removal and whitespace collapsing only; keeps every script intact so
/// a language classifier can still see it.
pub(crate) fn language_probe(raw: &str) -> String {
    let without_urls = url_pattern().replace_all(raw, " ");
    without_urls.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// True when `text` satisfies the document text contract.
pub fn is_normalized_document_text(text: &str) -> bool {
    text.bytes().all(|b| (0x20..=0x7e).contains(&b) && b != b'\\')
        && !text.starts_with(' ')
        && !text.ends_with(' ')
        && !text.contains("  ")
        && !url_pattern().is_match(text)
}
