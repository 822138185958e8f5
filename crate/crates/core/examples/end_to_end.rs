//! Runs every pipeline stage on the bundled corpus and prints the manifest
//! counts.
//!
//! ```text
//! cargo run --release --example end_to_end -- [OUT_DIR]
//! ```

use std::path::PathBuf;

use convo_topics::pipeline::{Manifest, Pipeline, PipelineConfig, Stage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("out/demo"), PathBuf::from);
    let config = PipelineConfig {
        input: PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_arena.jsonl"),
        output_dir: out.clone(),
        ..Default::default()
    };
    let pipeline = Pipeline::new(config)?;
    for stage in Stage::ALL {
        let outcome = pipeline.run_stage(stage)?;
        println!("{:<10} {} files", stage.name(), outcome.outputs.len());
    }
    let manifest = Manifest::load_or_default(&out)?;
    for (k, v) in &manifest.counts {
        println!("  {k:<18} {v}");
    }
    println!(
        "topic labels: {}",
        std::fs::read_to_string(out.join("topic_labels.csv"))?.trim()
    );
    Ok(())
}
