//! Win matrix, balanced win rates and per-topic rankings on the bundled
//! corpus, with every document assigned to its generating theme.
//!
//! ```text
//! cargo run --example preference_analytics
//! ```

use std::collections::HashMap;

use convo_topics::analytics::{analyze, AnalyticsParams};
use convo_topics::corpus::{
    build_documents, parse_str, HeuristicClassifier, ParseMode, PreprocessConfig, SchemaConfig,
};
use convo_topics::hdbscan::TopicAssignment;
use convo_topics::synthetic::{generate, SyntheticConfig, BUNDLED_CORPUS, THEMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_str(BUNDLED_CORPUS, &SchemaConfig::default(), ParseMode::Strict)?;
    let (docs, _) = build_documents(
        &parsed.records,
        &PreprocessConfig::default(),
        &HeuristicClassifier::default(),
    );
    let themes: HashMap<String, usize> = generate(&SyntheticConfig::default())
        .into_iter()
        .filter_map(|r| Some((r.json["question_id"].as_str()?.to_string(), r.theme?)))
        .collect();
    let labels = TopicAssignment {
        labels: docs.iter().map(|d| themes[&d.source_record] as i32).collect(),
        n_topics: THEMES.len(),
        noise_count: 0,
        selected_clusters: Vec::new(),
    };
    let doc_records: Vec<String> = docs.iter().map(|d| d.source_record.clone()).collect();
    let params = AnalyticsParams {
        min_appearances: 5,
        ..Default::default()
    };
    let report = analyze(&parsed.records, &doc_records, &labels, &params)?;

    let s = report.eda.outcome_split;
    println!("outcomes: A {:.1}%  B {:.1}%  tie {:.1}%", s.model_a, s.model_b, s.tie);
    if let Some(lp) = report.eda.length_pref {
        println!("shorter answer wins {:.1}% of decisive comparisons", lp.shorter);
    }
    println!("balanced win rate:");
    for b in &report.balanced {
        println!("  {:<18} {:>6.2}%  ({}/{})", b.model, b.wr_bal, b.wins, b.appearances);
    }
    for r in &report.rankings {
        let top: Vec<String> = r
            .ranked
            .iter()
            .map(|m| format!("{} {:.0}%", m.model, m.win_share))
            .collect();
        println!("{:<12} {}", THEMES[r.topic as usize].name, top.join(", "));
    }
    Ok(())
}
