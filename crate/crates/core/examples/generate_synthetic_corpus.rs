//! Writes the seeded arena-style demo corpus.
//!
//! ```text
//! cargo run --example generate_synthetic_corpus -- [OUT] [N_RECORDS] [SEED]
//! ```
//!
//! With no arguments this regenerates `data/synthetic_arena.jsonl`.

use std::path::PathBuf;

use convo_topics::synthetic::{generate, to_jsonl, SyntheticConfig, THEMES};

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_arena.jsonl"));
    let mut config = SyntheticConfig::default();
    if let Some(n) = args.next() {
        config.n_records = n.parse().expect("N_RECORDS must be an integer");
    }
    if let Some(seed) = args.next() {
        config.seed = seed.parse().expect("SEED must be an integer");
    }
    let records = generate(&config);
    std::fs::write(&out, to_jsonl(&records))?;
    println!("wrote {} records to {}", records.len(), out.display());
    for (t, theme) in THEMES.iter().enumerate() {
        let n = records.iter().filter(|r| r.theme == Some(t)).count();
        println!("  {:<12} {n}", theme.name);
    }
    Ok(())
}
