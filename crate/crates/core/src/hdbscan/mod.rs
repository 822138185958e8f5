//! Density-based clustering of the reduced embeddings.
//!
//! Core distances and mutual reachability feed an exact minimum spanning
//! tree, which is condensed into a cluster hierarchy over
//! `lambda = 1 / distance`. Flat topics are chosen by excess of mass.

mod condense;
mod core;
mod extract;
mod mst;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::condense::{ClusterNode, CondensedTree, PointMembership};
pub use self::core::{core_distances, euclidean, mutual_reachability, MutualReachability};
pub use self::extract::{label_points, select_clusters, TopicAssignment};
pub use self::mst::{build_mst, MstEdge};

#[derive(Debug, Error)]
pub enum HdbscanError {
    #[error("need more than {k} points, got {n}")]
    TooFewPoints { n: usize, k: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HdbscanParams {
    /// `None` picks `max(15, n / 200)`.
    pub min_cluster_size: Option<usize>,
    pub min_samples: usize,
    pub allow_single_cluster: bool,
}

impl Default for HdbscanParams {
    fn default() -> Self {
        Self {
            min_cluster_size: None,
            min_samples: 10,
            allow_single_cluster: false,
        }
    }
}

impl HdbscanParams {
    pub fn resolved_min_cluster_size(&self, n: usize) -> usize {
        self.min_cluster_size.unwrap_or_else(|| (n / 200).max(15))
    }
}

#[derive(Debug, Clone)]
pub struct HdbscanFit {
    pub core_distances: Vec<f64>,
    pub mst: Vec<MstEdge>,
    pub tree: CondensedTree,
    pub assignment: TopicAssignment,
}

/// Clusters `n` row-major points of dimension `dim`.
///
/// `min_samples` is clamped to `n - 1` so small inputs still run.
pub fn cluster(points: &[f64], dim: usize, params: &HdbscanParams) -> Result<HdbscanFit, HdbscanError> {
    if dim == 0 || !points.len().is_multiple_of(dim) {
        return Err(HdbscanError::InvalidParams(format!(
            "{} values do not form rows of dimension {dim}",
            points.len()
        )));
    }
    let n = points.len() / dim;
    if n < 2 {
        return Err(HdbscanError::TooFewPoints { n, k: 1 });
    }
    let min_samples = params.min_samples.clamp(1, n - 1);
    let mreach = MutualReachability::new(points, dim, min_samples)?;
    let mst = build_mst(n, |a, b| mreach.distance(a, b));
    let tree = CondensedTree::from_mst(&mst, n, params.resolved_min_cluster_size(n))?;
    let selected = select_clusters(&tree, params.allow_single_cluster);
    let assignment = label_points(&tree, &selected);
    Ok(HdbscanFit {
        core_distances: mreach.core,
        mst,
        tree,
        assignment,
    })
}
