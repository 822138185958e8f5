//! Clusters three Gaussian blobs with a few far outliers.
//!
//! ```text
//! cargo run --example hdbscan_clusters
//! ```

use convo_topics::hdbscan::{cluster, HdbscanParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut points = Vec::new();
    for center in [[0.0, 0.0], [10.0, 0.0], [5.0, 8.0]] {
        for _ in 0..80 {
            points.push(center[0] + rng.random_range(-1.5..1.5));
            points.push(center[1] + rng.random_range(-1.5..1.5));
        }
    }
    points.extend([60.0, 60.0, -50.0, 40.0, 30.0, -70.0]);

    let params = HdbscanParams {
        min_cluster_size: Some(15),
        ..Default::default()
    };
    let fit = cluster(&points, 2, &params)?;
    let a = &fit.assignment;
    println!("{} topics, {} noise points", a.n_topics, a.noise_count);
    println!("topic sizes {:?}", a.topic_sizes());
    println!("outlier labels {:?}", &a.labels[240..]);
    println!("condensed tree has {} clusters", fit.tree.nodes().len());
    Ok(())
}
