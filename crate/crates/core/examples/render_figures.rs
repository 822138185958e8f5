//! Renders one chart of each kind into a directory.
//!
//! ```text
//! cargo run --example render_figures -- [OUT_DIR]
//! ```

use std::path::PathBuf;

use convo_topics::hierarchy::{agglomerate_distances, Dendrogram};
use convo_topics::report::{render, ChartData, RenderSpec};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("figures"), PathBuf::from);
    std::fs::create_dir_all(&out)?;

    let mut dendrogram = Dendrogram {
        leaves: vec![0, 1, 2],
        merges: agglomerate_distances(3, &[0.0, 0.3, 0.9, 0.3, 0.0, 0.8, 0.9, 0.8, 0.0]),
        leaf_order: Vec::new(),
    };
    dendrogram.leaf_order = dendrogram.members(4);

    let specs = [
        (
            "heatmap",
            ChartData::Heatmap {
                rows: names(&["code", "food"]),
                cols: names(&["gpt-4", "claude-v1", "vicuna-13b"]),
                values: vec![50.0, 30.0, 20.0, 20.0, 45.0, 35.0],
            },
        ),
        (
            "grouped_bars",
            ChartData::GroupedBars {
                groups: names(&["code", "food"]),
                series: names(&["gpt-4", "claude-v1"]),
                values: vec![60.0, 40.0, 35.0, 65.0],
            },
        ),
        (
            "coverage",
            ChartData::CoverageBars {
                labels: names(&["T0", "T1", "T2"]),
                cumulative: vec![50.0, 80.0, 100.0],
                threshold: 82.0,
            },
        ),
        (
            "dendrogram",
            ChartData::Dendrogram {
                dendrogram,
                labels: names(&["code", "scripts", "food"]),
            },
        ),
        (
            "frequency",
            ChartData::FreqBars {
                labels: names(&["gpt-4", "claude-v1"]),
                values: vec![120.0, 80.0],
            },
        ),
    ];
    for (name, data) in specs {
        let svg = render(&RenderSpec::new(name, data))?;
        let path = out.join(format!("{name}.svg"));
        std::fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
