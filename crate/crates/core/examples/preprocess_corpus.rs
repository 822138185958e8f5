//! Parses the bundled corpus, then normalizes and filters prompts into documents.
//!
//! ```text
//! cargo run --example preprocess_corpus
//! ```

use convo_topics::corpus::{
    build_documents, parse_str, HeuristicClassifier, ParseMode, PreprocessConfig, SchemaConfig,
};
use convo_topics::synthetic::BUNDLED_CORPUS;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_str(BUNDLED_CORPUS, &SchemaConfig::default(), ParseMode::Lenient)?;
    println!(
        "{} records, {} malformed lines",
        parsed.records.len(),
        parsed.report.malformed.len()
    );

    let (docs, drops) = build_documents(
        &parsed.records,
        &PreprocessConfig::default(),
        &HeuristicClassifier::default(),
    );
    println!("{} documents kept", docs.len());
    for (reason, n) in &drops.counts {
        println!("  dropped {n} as {reason:?}");
    }
    for d in docs.iter().take(3) {
        println!("{} <- {}: {}", d.doc_id, d.source_record, d.text);
    }
    Ok(())
}
