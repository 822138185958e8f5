//! Average-linkage hierarchy over topic keyword centroids, cut into
//! super-clusters.
//!
//! ```text
//! cargo run --example topic_dendrogram -- [THRESHOLD]
//! ```

use convo_topics::corpus::Document;
use convo_topics::hdbscan::TopicAssignment;
use convo_topics::hierarchy::{agglomerate, cut, topic_centroids};
use convo_topics::stopwords::english_stopwords;
use convo_topics::topicrep::build_topic_model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let threshold: f64 = std::env::args().nth(1).map_or(Ok(0.8), |s| s.parse())?;
    let topics = [
        "python code function debug",
        "rust code compiler borrow",
        "pasta recipe garlic oven",
        "bread recipe flour oven",
        "marathon training running pace",
    ];
    let docs: Vec<Document> = topics
        .iter()
        .enumerate()
        .map(|(i, t)| Document {
            doc_id: format!("d{i}"),
            text: t.to_string(),
            token_estimate: 4,
            source_record: format!("r{i}"),
        })
        .collect();
    let labels = TopicAssignment {
        labels: (0..topics.len() as i32).collect(),
        n_topics: topics.len(),
        noise_count: 0,
        selected_clusters: Vec::new(),
    };
    let model = build_topic_model(&docs, &labels, english_stopwords(), 4)?;
    let dendrogram = agglomerate(&topic_centroids(&model));
    for (k, m) in dendrogram.merges.iter().enumerate() {
        println!(
            "node {}: {} + {} at {:.3} ({} topics)",
            topics.len() + k,
            m.left,
            m.right,
            m.distance,
            m.size
        );
    }
    let groups = cut(&dendrogram, threshold);
    for (t, g) in groups.iter().enumerate() {
        println!("super-cluster {g}: {}", topics[t]);
    }
    Ok(())
}
