use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::UmapError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    #[default]
    Cosine,
}

impl Metric {
    pub fn distance<T: Copy + Into<f64>>(self, a: &[T], b: &[T]) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| {
                    let d = x.into() - y.into();
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            Metric::Cosine => {
                let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
                for (&x, &y) in a.iter().zip(b) {
                    let (x, y) = (x.into(), y.into());
                    dot += x * y;
                    na += x * x;
                    nb += y * y;
                }
                if na == 0.0 || nb == 0.0 {
                    // zero vectors have no direction
                    return 1.0;
                }
                (1.0 - dot / (na.sqrt() * nb.sqrt())).max(0.0)
            }
        }
    }
}

/// Exact k-nearest-neighbor table, row-major `n x k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    pub k: usize,
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
}

impl NeighborTable {
    pub fn len(&self) -> usize {
        self.indices.len() / self.k.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    pub fn distances(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }
}

/// Brute-force kNN over row-major points. Self is excluded; equal distances
/// are ordered by lower index.
pub fn knn_rows<T>(data: &[T], dim: usize, k: usize, metric: Metric) -> Result<NeighborTable, UmapError>
where
    T: Copy + Into<f64> + Sync,
{
    let n = data.len().checked_div(dim).unwrap_or(0);
    if k == 0 {
        return Err(UmapError::InvalidParams("k must be at least 1".into()));
    }
    if n <= k {
        return Err(UmapError::TooFewPoints { n, k });
    }
    let rows: Vec<(Vec<usize>, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = &data[i * dim..(i + 1) * dim];
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (metric.distance(a, &data[j * dim..(j + 1) * dim]), j))
                .collect();
            let cmp = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
            if cand.len() > k {
                cand.select_nth_unstable_by(k - 1, cmp);
                cand.truncate(k);
            }
            cand.sort_unstable_by(cmp);
            cand.into_iter().map(|(d, j)| (j, d)).unzip()
        })
        .collect();
    let mut indices = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    for (idx, dist) in rows {
        indices.extend(idx);
        distances.extend(dist);
    }
    Ok(NeighborTable { k, indices, distances })
}
