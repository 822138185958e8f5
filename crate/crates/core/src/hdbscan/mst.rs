use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Below this many points the Prim update loop runs serially.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

impl MstEdge {
    fn new(u: usize, v: usize, weight: f64) -> Self {
        Self {
            a: u.min(v),
            b: u.max(v),
            weight,
        }
    }

    /// Total order: weight, then lower endpoint, then higher endpoint.
    pub fn order(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

/// Exact minimum spanning tree of the complete graph on `n` points by dense
/// Prim's algorithm. Edges are compared by [`MstEdge::order`], which makes the
/// tree unique; the result is sorted in that order.
pub fn build_mst<F>(n: usize, distance: F) -> Vec<MstEdge>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<MstEdge>> = vec![None; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0usize;
    in_tree[0] = true;

    let better = |cand: &MstEdge, old: &Option<MstEdge>| match old {
        None => true,
        Some(o) => cand.order(o) == Ordering::Less,
    };

    for _ in 1..n {
        let relax = |(v, slot): (usize, &mut Option<MstEdge>)| {
            let cand = MstEdge::new(current, v, distance(current, v));
            if better(&cand, slot) {
                *slot = Some(cand);
            }
        };
        if n >= PARALLEL_THRESHOLD {
            best.par_iter_mut()
                .enumerate()
                .filter(|(v, _)| !in_tree[*v])
                .for_each(relax);
        } else {
            best.iter_mut()
                .enumerate()
                .filter(|(v, _)| !in_tree[*v])
                .for_each(relax);
        }
        let (next, edge) = best
            .iter()
            .enumerate()
            .filter(|(v, _)| !in_tree[*v])
            .filter_map(|(v, e)| e.map(|e| (v, e)))
            .min_by(|x, y| x.1.order(&y.1))
            .expect("complete graph always has a crossing edge");
        in_tree[next] = true;
        edges.push(edge);
        current = next;
    }
    edges.sort_by(MstEdge::order);
    edges
}
