//! Average-linkage dendrogram over topic c-TF-IDF centroids.
//!
//! Distances are cosine distances between L2-normalized score rows. Node ids
//! follow the usual convention: leaves are `0..T`, the `k`-th merge creates
//! node `T + k`.

use serde::{Deserialize, Serialize};

use crate::topicrep::TopicModel;

#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    /// Topic id behind each row.
    pub topics: Vec<usize>,
    pub dim: usize,
    /// Row-major, unit rows.
    pub rows: Vec<f64>,
    /// Topics left out because their score row is all zero.
    pub degenerate: Vec<usize>,
}

impl Centroids {
    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }
}

pub fn topic_centroids(model: &TopicModel) -> Centroids {
    let dim = model.vocabulary.len();
    let mut topics = Vec::new();
    let mut rows = Vec::new();
    let mut degenerate = Vec::new();
    for t in 0..model.n_topics() {
        let row = model.score_row(t);
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            log::warn!("topic {t} has an all-zero score vector; left out of the dendrogram");
            degenerate.push(t);
            continue;
        }
        topics.push(t);
        rows.extend(row.iter().map(|x| x / norm));
    }
    Centroids {
        topics,
        dim,
        rows,
        degenerate,
    }
}

/// `1 - a.b` for unit vectors, clamped to `[0, 2]`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (1.0 - dot).clamp(0.0, 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    /// Topic id of each leaf.
    pub leaves: Vec<usize>,
    pub merges: Vec<Merge>,
    /// Leaves left to right for plotting.
    pub leaf_order: Vec<usize>,
}

impl Dendrogram {
    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf indices under node `id`.
    pub fn members(&self, id: usize) -> Vec<usize> {
        let n = self.n_leaves();
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if x < n {
                out.push(x);
            } else {
                let m = self.merges[x - n];
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        out
    }
}

/// Agglomerates from a full distance matrix (`n x n`, row-major).
///
/// At each step the two active clusters with the smallest average-linkage
/// distance merge; ties go to the pair with the smallest node ids.
pub fn agglomerate_distances(n: usize, distances: &[f64]) -> Vec<Merge> {
    assert_eq!(distances.len(), n * n, "distance matrix must be n x n");
    if n < 2 {
        return Vec::new();
    }
    // linkage distances indexed by node id, grown as merges are made
    let total = 2 * n - 1;
    let mut d = vec![f64::INFINITY; total * total];
    for i in 0..n {
        for j in 0..n {
            d[i * total + j] = distances[i * n + j];
        }
    }
    let mut size = vec![1usize; total];
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let dist = d[a * total + b];
                if dist < best.0 || (dist == best.0 && (a, b) < (best.1, best.2)) {
                    best = (dist, a, b);
                }
            }
        }
        let (dist, a, b) = best;
        let id = n + step;
        size[id] = size[a] + size[b];
        active.retain(|&x| x != a && x != b);
        for &c in &active {
            let v = (size[a] as f64 * d[a * total + c] + size[b] as f64 * d[b * total + c]) / size[id] as f64;
            d[id * total + c] = v;
            d[c * total + id] = v;
        }
        active.push(id);
        merges.push(Merge {
            left: a,
            right: b,
            distance: dist,
            size: size[id],
        });
    }
    merges
}

pub fn agglomerate(centroids: &Centroids) -> Dendrogram {
    let n = centroids.len();
    let mut distances = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = cosine_distance(centroids.row(i), centroids.row(j));
            distances[i * n + j] = v;
            distances[j * n + i] = v;
        }
    }
    let merges = agglomerate_distances(n, &distances);
    debug_assert!(merges.windows(2).all(|w| w[0].distance <= w[1].distance + 1e-12));
    let mut dendrogram = Dendrogram {
        leaves: centroids.topics.clone(),
        merges,
        leaf_order: Vec::new(),
    };
    dendrogram.leaf_order = if n == 0 {
        Vec::new()
    } else {
        dendrogram.members(2 * n - 2)
    };
    dendrogram
}

/// Super-cluster label per leaf: leaves joined by merges strictly below
/// `threshold` share a label. Labels are numbered by first leaf.
pub fn cut(dendrogram: &Dendrogram, threshold: f64) -> Vec<usize> {
    let n = dendrogram.n_leaves();
    let mut group: Vec<usize> = (0..n).collect();
    for (k, m) in dendrogram.merges.iter().enumerate() {
        if m.distance < threshold {
            let members = dendrogram.members(n + k);
            let root = members.iter().map(|&l| group[l]).min().unwrap_or(0);
            let old: Vec<usize> = members.iter().map(|&l| group[l]).collect();
            for g in group.iter_mut() {
                if old.contains(g) {
                    *g = root;
                }
            }
        }
    }
    let mut remap = std::collections::BTreeMap::new();
    group
        .iter()
        .map(|g| {
            let next = remap.len();
            *remap.entry(*g).or_insert(next)
        })
        .collect()
}
