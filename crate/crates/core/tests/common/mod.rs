#![allow(dead_code)]

use std::collections::HashMap;

use convo_topics::corpus::Document;
use convo_topics::hdbscan::TopicAssignment;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn choose2(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand(a: &[i64], b: &[i64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut table: HashMap<(i64, i64), u64> = HashMap::new();
    let mut rows: HashMap<i64, u64> = HashMap::new();
    let mut cols: HashMap<i64, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&n| choose2(n)).sum();
    let sum_a: f64 = rows.values().map(|&n| choose2(n)).sum();
    let sum_b: f64 = cols.values().map(|&n| choose2(n)).sum();
    let expected = sum_a * sum_b / choose2(a.len() as u64);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Standard normal draw (Box-Muller).
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Isotropic Gaussian blob appended row-major to `out`.
pub fn gaussian_blob(rng: &mut ChaCha8Rng, center: &[f64], sd: f64, n: usize, out: &mut Vec<f64>) {
    for _ in 0..n {
        out.extend(center.iter().map(|c| c + sd * normal(rng)));
    }
}

pub fn doc(i: usize, text: &str) -> Document {
    Document {
        doc_id: format!("d{i}"),
        text: text.to_string(),
        token_estimate: text.split_whitespace().count(),
        source_record: format!("r{i}"),
    }
}

pub fn assignment(labels: Vec<i32>) -> TopicAssignment {
    convo_topics::pipeline::assignment_from_labels(labels)
}

#[test]
fn ari_basics() {
    assert_eq!(adjusted_rand(&[0, 0, 1, 1], &[5, 5, 7, 7]), 1.0);
    assert!(adjusted_rand(&[0, 0, 1, 1], &[0, 1, 0, 1]) < 0.0);
    // sklearn.metrics.adjusted_rand_score([0,0,0,1,1,1],[0,0,1,1,2,2])
    assert!((adjusted_rand(&[0, 0, 0, 1, 1, 1], &[0, 0, 1, 1, 2, 2]) - 0.24242424242424243).abs() < 1e-12);
}
