//! Hash-embeds a few prompts and round-trips them through the EMB1 format.
//!
//! ```text
//! cargo run --example hash_embeddings
//! ```

use convo_topics::corpus::Document;
use convo_topics::embed::{hash_embed, read_embeddings, write_embeddings};

fn doc(i: usize, text: &str) -> Document {
    Document {
        doc_id: format!("d{i}"),
        text: text.into(),
        token_estimate: text.split_whitespace().count(),
        source_record: format!("r{i}"),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let docs = [
        doc(0, "write a python function to reverse a list"),
        doc(1, "python list comprehension with a function"),
        doc(2, "bake a chocolate cake in the oven"),
    ];
    let (m, empty) = hash_embed(&docs, 64, 0)?;
    println!(
        "{} x {} matrix, {} empty rows, unit norm: {}",
        m.len(),
        m.dim(),
        empty.len(),
        m.is_normalized()
    );

    let cos = |a: usize, b: usize| -> f32 { m.row(a).iter().zip(m.row(b)).map(|(x, y)| x * y).sum() };
    println!("cos(python, python) = {:.3}", cos(0, 1));
    println!("cos(python, baking) = {:.3}", cos(0, 2));

    let mut bytes = Vec::new();
    write_embeddings(&m, &mut bytes)?;
    let back = read_embeddings(bytes.as_slice())?;
    println!("EMB1: {} bytes, round trip equal: {}", bytes.len(), back == m);
    Ok(())
}
