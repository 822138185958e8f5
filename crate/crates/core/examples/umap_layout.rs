//! Reduces hash embeddings of two unrelated prompt groups to 2-D and
//! reports how well the groups separate.
//!
//! ```text
//! cargo run --release --example umap_layout -- [SEED]
//! ```

use convo_topics::corpus::Document;
use convo_topics::embed::hash_embed;
use convo_topics::umap::{fit, UmapParams};

const CODE: &[&str] = &[
    "python", "function", "loop", "variable", "compile", "debug", "syntax", "array",
];
const FOOD: &[&str] = &["recipe", "garlic", "oven", "bake", "pasta", "onion", "flour", "butter"];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map_or(Ok(7), |s| s.parse())?;
    let docs: Vec<Document> = (0..60)
        .map(|i| {
            let pool = if i % 2 == 0 { CODE } else { FOOD };
            let text: Vec<&str> = (0..6).map(|k| pool[(i * 7 + k * 3) % pool.len()]).collect();
            Document {
                doc_id: format!("d{i}"),
                text: text.join(" "),
                token_estimate: 6,
                source_record: format!("r{i}"),
            }
        })
        .collect();
    let (matrix, _) = hash_embed(&docs, 128, 0)?;
    let params = UmapParams {
        n_components: 2,
        n_neighbors: 10,
        seed,
        ..Default::default()
    };
    let (graph, layout) = fit(&matrix, &params)?;
    println!(
        "{} symmetric edges, {} epochs",
        graph.symmetric_edges.len(),
        layout.epochs_run
    );

    let centroid = |parity: usize| {
        let pts: Vec<&[f64]> = (0..docs.len())
            .filter(|i| i % 2 == parity)
            .map(|i| layout.point(i))
            .collect();
        let n = pts.len() as f64;
        [
            pts.iter().map(|p| p[0]).sum::<f64>() / n,
            pts.iter().map(|p| p[1]).sum::<f64>() / n,
        ]
    };
    let (a, b) = (centroid(0), centroid(1));
    println!("code centroid ({:.2}, {:.2})", a[0], a[1]);
    println!("food centroid ({:.2}, {:.2})", b[0], b[1]);
    println!(
        "centroid gap {:.2}",
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    );
    Ok(())
}
