//! Fuzzy neighbor graph and stochastic low-dimensional layout.
//!
//! Directed edge weights follow
//! `w_ij = exp(-max(0, d(x_i, x_j) - rho_i) / sigma_i)` where `rho_i` is the
//! distance to the nearest neighbor and `sigma_i` is calibrated per point
//! ([`smooth_knn_calibrate`]). Directed weights are symmetrized with the
//! probabilistic union `a + b - ab` and the resulting graph is laid out by
//! [`optimize_layout`].

mod calibrate;
mod curve;
mod knn;
mod layout;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::EmbeddingMatrix;

pub use calibrate::{membership, smooth_knn_calibrate, Calibration, CALIBRATION_TOLERANCE};
pub use curve::{fit_curve, reference_curve, similarity, CurveFit};
pub use knn::{knn_rows, Metric, NeighborTable};
pub use layout::{layout_energy, optimize_layout, random_init, LayoutMode, LayoutParams, LayoutResult};

#[derive(Debug, Error)]
pub enum UmapError {
    #[error("need more than {k} points for {k} neighbors, got {n}")]
    TooFewPoints { n: usize, k: usize },
    #[error("curve fit diverged (rms residual {residual})")]
    FitDiverged { residual: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Probabilistic t-conorm used to merge the two directed memberships.
pub fn fuzzy_union_pair(a: f64, b: f64) -> f64 {
    a + b - a * b
}

/// Symmetrizes directed kNN weights. Output edges have `i < j`, are sorted
/// by `(i, j)`, and omit zero weights.
pub fn fuzzy_union(neighbors: &NeighborTable, weights: &[f64]) -> Vec<SymmetricEdge> {
    let n = neighbors.len();
    let k = neighbors.k;
    // (low, high, weight from low, weight from high)
    let mut directed: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(n * k);
    for i in 0..n {
        for (slot, &j) in neighbors.neighbors(i).iter().enumerate() {
            let w = weights[i * k + slot];
            if w <= 0.0 || i == j {
                continue;
            }
            if i < j {
                directed.push((i, j, w, 0.0));
            } else {
                directed.push((j, i, 0.0, w));
            }
        }
    }
    directed.sort_unstable_by_key(|x| (x.0, x.1));

    let mut edges: Vec<SymmetricEdge> = Vec::with_capacity(directed.len());
    let mut iter = directed.into_iter().peekable();
    while let Some((i, j, mut a, mut b)) = iter.next() {
        while let Some(&(i2, j2, a2, b2)) = iter.peek() {
            if (i2, j2) != (i, j) {
                break;
            }
            a = a.max(a2);
            b = b.max(b2);
            iter.next();
        }
        let weight = fuzzy_union_pair(a, b);
        if weight > 0.0 {
            edges.push(SymmetricEdge { i, j, weight });
        }
    }
    edges
}

/// kNN table, per-point calibration, directed weights and the symmetrized
/// edge list.
#[derive(Debug, Clone)]
pub struct NeighborGraph {
    pub k: usize,
    pub neighbors: NeighborTable,
    pub rho: Vec<f64>,
    pub sigma: Vec<f64>,
    pub clamped: Vec<bool>,
    /// Row-major `n x k`, aligned with `neighbors`.
    pub directed_weights: Vec<f64>,
    pub symmetric_edges: Vec<SymmetricEdge>,
}

impl NeighborGraph {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

pub fn build_graph(neighbors: NeighborTable) -> NeighborGraph {
    let n = neighbors.len();
    let k = neighbors.k;
    let mut rho = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut clamped = Vec::with_capacity(n);
    let mut directed_weights = Vec::with_capacity(n * k);
    for i in 0..n {
        let row = neighbors.distances(i);
        let cal = smooth_knn_calibrate(row, k);
        directed_weights.extend(row.iter().map(|&d| membership(d, cal.rho, cal.sigma)));
        rho.push(cal.rho);
        sigma.push(cal.sigma);
        clamped.push(cal.clamped);
    }
    let symmetric_edges = fuzzy_union(&neighbors, &directed_weights);
    NeighborGraph {
        k,
        neighbors,
        rho,
        sigma,
        clamped,
        directed_weights,
        symmetric_edges,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UmapParams {
    pub n_neighbors: usize,
    pub n_components: usize,
    pub min_dist: f64,
    pub spread: f64,
    pub epochs: usize,
    pub metric: Metric,
    pub mode: LayoutMode,
    /// Set per run rather than read from config files.
    #[serde(skip)]
    pub seed: u64,
    pub negative_sample_rate: usize,
}

impl Default for UmapParams {
    fn default() -> Self {
        Self {
            n_neighbors: 15,
            n_components: 5,
            min_dist: 0.1,
            spread: 1.0,
            epochs: 200,
            metric: Metric::Cosine,
            mode: LayoutMode::SerialDeterministic,
            seed: 42,
            negative_sample_rate: 5,
        }
    }
}

pub fn knn_graph(matrix: &EmbeddingMatrix, k: usize, metric: Metric) -> Result<NeighborTable, UmapError> {
    knn_rows(matrix.as_slice(), matrix.dim(), k, metric)
}

/// Full reduction: kNN graph, fuzzy union, curve fit and layout.
pub fn fit(matrix: &EmbeddingMatrix, params: &UmapParams) -> Result<(NeighborGraph, LayoutResult), UmapError> {
    if params.n_components < 2 || params.n_components >= matrix.dim() {
        return Err(UmapError::InvalidParams(format!(
            "output dimension must be in [2, {}), got {}",
            matrix.dim(),
            params.n_components
        )));
    }
    let table = knn_graph(matrix, params.n_neighbors, params.metric)?;
    let graph = build_graph(table);
    let curve = fit_curve(params.min_dist, params.spread)?;
    let layout_params = LayoutParams {
        dim: params.n_components,
        epochs: params.epochs,
        seed: params.seed,
        mode: params.mode,
        a: curve.a,
        b: curve.b,
        negative_sample_rate: params.negative_sample_rate,
        ..Default::default()
    };
    let edges = if graph.symmetric_edges.is_empty() {
        return Err(UmapError::InvalidParams("neighbor graph has no edges".into()));
    } else {
        &graph.symmetric_edges
    };
    let layout = optimize_layout(edges, matrix.len(), &layout_params)?;
    Ok((graph, layout))
}

/// Writes `doc_id,x0,..,x{d-1}` rows.
pub fn write_layout_csv<W: Write>(ids: &[String], layout: &LayoutResult, writer: W) -> Result<(), UmapError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["doc_id".to_string()];
    header.extend((0..layout.dim).map(|d| format!("x{d}")));
    w.write_record(&header).map_err(csv_io)?;
    for (i, id) in ids.iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend(layout.point(i).iter().map(|v| format!("{v:?}")));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> UmapError {
    UmapError::Io(std::io::Error::other(e))
}
