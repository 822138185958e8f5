//! Class-based TF-IDF keywords for hand-labeled prompt groups.
//!
//! ```text
//! cargo run --example ctfidf_keywords
//! ```

use convo_topics::corpus::Document;
use convo_topics::hdbscan::TopicAssignment;
use convo_topics::stopwords::english_stopwords;
use convo_topics::topicrep::{build_topic_model, write_topics_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let texts = [
        (0, "How do I sort a python list of dictionaries"),
        (0, "Python error when importing a module"),
        (0, "Write a python class for a linked list"),
        (1, "Best pasta sauce recipe with garlic"),
        (1, "How long to bake garlic bread in the oven"),
        (-1, "hello there"),
    ];
    let docs: Vec<Document> = texts
        .iter()
        .enumerate()
        .map(|(i, (_, t))| Document {
            doc_id: format!("d{i}"),
            text: t.to_string(),
            token_estimate: t.split_whitespace().count(),
            source_record: format!("r{i}"),
        })
        .collect();
    let labels = TopicAssignment {
        labels: texts.iter().map(|(l, _)| *l).collect(),
        n_topics: 2,
        noise_count: 1,
        selected_clusters: Vec::new(),
    };
    let model = build_topic_model(&docs, &labels, english_stopwords(), 5)?;
    for t in 0..model.n_topics() {
        println!("topic {t} [{}]", model.labels[t]);
        for (word, score) in &model.keywords[t] {
            println!("  {word:<12} {score:.4}");
        }
    }
    let mut csv = Vec::new();
    write_topics_csv(&model, 3, &mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}
