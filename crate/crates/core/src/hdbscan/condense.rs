use std::collections::VecDeque;

use serde::Serialize;

use super::mst::MstEdge;
use super::HdbscanError;

/// Ratio between the smallest positive edge weight and the distance used in
/// place of zero-weight edges.
const ZERO_WEIGHT_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub lambda_birth: f64,
    pub lambda_death: f64,
    pub size: usize,
    pub stability: f64,
    #[serde(skip)]
    pub children: Vec<usize>,
}

/// The condensed cluster each point last belonged to and the lambda at which
/// it left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointMembership {
    pub cluster: usize,
    pub lambda: f64,
}

/// Cluster hierarchy keeping only splits where both sides have at least
/// `min_cluster_size` points. Cluster `0` is the root; children always have
/// larger ids than their parents.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedTree {
    pub n_points: usize,
    pub min_cluster_size: usize,
    /// Lambda assigned to zero-weight edges.
    pub lambda_cap: f64,
    pub clusters: Vec<ClusterNode>,
    pub points: Vec<PointMembership>,
}

#[derive(Debug, Clone, Copy)]
struct LinkageNode {
    left: usize,
    right: usize,
    distance: f64,
    size: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    /// SL node currently representing each root's component.
    label: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            label: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Builds the single-linkage tree (nodes `n..2n-1`) from ascending MST edges.
fn single_linkage(edges: &[MstEdge], n: usize) -> Vec<LinkageNode> {
    let mut uf = UnionFind::new(n);
    let mut size = vec![1usize; 2 * n];
    let mut nodes = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        let (ra, rb) = (uf.find(e.a), uf.find(e.b));
        let (la, lb) = (uf.label[ra], uf.label[rb]);
        let id = n + nodes.len();
        size[id] = size[la] + size[lb];
        nodes.push(LinkageNode {
            left: la,
            right: lb,
            distance: e.weight,
            size: size[id],
        });
        uf.parent[rb] = ra;
        uf.label[ra] = id;
    }
    nodes
}

impl CondensedTree {
    /// Condenses a minimum spanning tree over `n` points.
    ///
    /// Edges are merged in ascending order of weight; `lambda = 1 / weight`,
    /// with zero weights mapped to `lambda_cap = 1 / (1e-3 * smallest positive
    /// weight)`. Walking down from the root, a split whose two sides both
    /// reach `min_cluster_size` creates two child clusters; otherwise the
    /// smaller side's points leave the current cluster at that lambda.
    pub fn from_mst(edges: &[MstEdge], n: usize, min_cluster_size: usize) -> Result<Self, HdbscanError> {
        if min_cluster_size < 2 {
            return Err(HdbscanError::InvalidParams(
                "min_cluster_size must be at least 2".into(),
            ));
        }
        if n == 0 {
            return Err(HdbscanError::TooFewPoints { n, k: 1 });
        }
        if edges.len() != n - 1 || edges.iter().any(|e| e.a >= n || e.b >= n) {
            return Err(HdbscanError::InvalidParams(format!(
                "expected a spanning tree with {} edges over {n} points",
                n - 1
            )));
        }
        let mut sorted = edges.to_vec();
        sorted.sort_by(MstEdge::order);

        let min_positive = sorted
            .iter()
            .map(|e| e.weight)
            .filter(|&w| w > 0.0)
            .fold(f64::INFINITY, f64::min);
        let lambda_cap = if min_positive.is_finite() {
            1.0 / (min_positive * ZERO_WEIGHT_SCALE)
        } else {
            1.0
        };
        let lambda_of = |w: f64| if w > 0.0 { 1.0 / w } else { lambda_cap };

        let linkage = single_linkage(&sorted, n);
        let node_size = |id: usize| if id < n { 1 } else { linkage[id - n].size };

        // leaf order so every subtree is a contiguous range
        let mut leaf_order = Vec::with_capacity(n);
        let mut range = vec![(0usize, 0usize); 2 * n];
        if n == 1 {
            leaf_order.push(0);
            range[0] = (0, 1);
        } else {
            let root = 2 * n - 2;
            let mut stack = vec![(root, false)];
            while let Some((id, expanded)) = stack.pop() {
                if id < n {
                    range[id] = (leaf_order.len(), leaf_order.len() + 1);
                    leaf_order.push(id);
                } else if expanded {
                    let node = linkage[id - n];
                    range[id] = (range[node.left].0, range[node.right].1);
                } else {
                    let node = linkage[id - n];
                    stack.push((id, true));
                    stack.push((node.right, false));
                    stack.push((node.left, false));
                }
            }
        }

        let mut tree = CondensedTree {
            n_points: n,
            min_cluster_size,
            lambda_cap,
            clusters: vec![ClusterNode {
                id: 0,
                parent: None,
                lambda_birth: 0.0,
                lambda_death: 0.0,
                size: n,
                stability: 0.0,
                children: Vec::new(),
            }],
            points: vec![
                PointMembership {
                    cluster: 0,
                    lambda: 0.0
                };
                n
            ],
        };
        if n == 1 {
            return Ok(tree);
        }

        let mut queue = VecDeque::from([(2 * n - 2, 0usize)]);
        while let Some((node_id, cid)) = queue.pop_front() {
            let node = linkage[node_id - n];
            let lambda = lambda_of(node.distance);
            let birth = tree.clusters[cid].lambda_birth;
            tree.clusters[cid].lambda_death = lambda;
            let (ls, rs) = (node_size(node.left), node_size(node.right));
            let (left_big, right_big) = (ls >= min_cluster_size, rs >= min_cluster_size);

            match (left_big, right_big) {
                (true, true) => {
                    tree.clusters[cid].stability += (ls + rs) as f64 * (lambda - birth);
                    for (child, size) in [(node.left, ls), (node.right, rs)] {
                        let new_id = tree.clusters.len();
                        tree.clusters.push(ClusterNode {
                            id: new_id,
                            parent: Some(cid),
                            lambda_birth: lambda,
                            lambda_death: lambda,
                            size,
                            stability: 0.0,
                            children: Vec::new(),
                        });
                        tree.clusters[cid].children.push(new_id);
                        queue.push_back((child, new_id));
                    }
                }
                (true, false) => {
                    tree.fall_out(&leaf_order[range[node.right].0..range[node.right].1], cid, lambda);
                    queue.push_back((node.left, cid));
                }
                (false, true) => {
                    tree.fall_out(&leaf_order[range[node.left].0..range[node.left].1], cid, lambda);
                    queue.push_back((node.right, cid));
                }
                (false, false) => {
                    let (start, end) = range[node_id];
                    tree.fall_out(&leaf_order[start..end], cid, lambda);
                }
            }
        }
        Ok(tree)
    }

    fn fall_out(&mut self, points: &[usize], cluster: usize, lambda: f64) {
        let birth = self.clusters[cluster].lambda_birth;
        for &p in points {
            self.points[p] = PointMembership { cluster, lambda };
        }
        self.clusters[cluster].stability += points.len() as f64 * (lambda - birth);
    }

    pub fn root(&self) -> &ClusterNode {
        &self.clusters[0]
    }

    pub fn is_descendant(&self, mut cluster: usize, ancestor: usize) -> bool {
        loop {
            if cluster == ancestor {
                return true;
            }
            match self.clusters[cluster].parent {
                Some(p) => cluster = p,
                None => return false,
            }
        }
    }

    /// Clusters alive at `lambda` with their current members (points whose
    /// membership lies in the cluster's subtree and that leave above
    /// `lambda`), restricted to groups of at least `min_cluster_size`.
    /// Member lists are sorted; groups are sorted by first member.
    ///
    /// Boundaries are exclusive, so query between distinct edge lambdas.
    pub fn components_at(&self, lambda: f64) -> Vec<Vec<usize>> {
        let mut groups = Vec::new();
        for c in &self.clusters {
            let alive = (c.parent.is_none() || c.lambda_birth < lambda) && lambda < c.lambda_death;
            if !alive {
                continue;
            }
            let members: Vec<usize> = (0..self.n_points)
                .filter(|&p| {
                    let m = self.points[p];
                    m.lambda > lambda && self.is_descendant(m.cluster, c.id)
                })
                .collect();
            if members.len() >= self.min_cluster_size {
                groups.push(members);
            }
        }
        groups.sort();
        groups
    }

    /// Rows for the condensed-tree JSON dump.
    pub fn nodes(&self) -> &[ClusterNode] {
        &self.clusters
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n_points": self.n_points,
            "min_cluster_size": self.min_cluster_size,
            "lambda_cap": self.lambda_cap,
            "nodes": self.clusters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdbscan::mst::build_mst;

    fn chain(n: usize, w: f64) -> Vec<MstEdge> {
        (0..n - 1)
            .map(|i| MstEdge {
                a: i,
                b: i + 1,
                weight: w,
            })
            .collect()
    }

    #[test]
    fn two_far_blobs_split_once() {
        // 10 points at 0..0.9 and 10 points at 100..100.9 on a line
        let pts: Vec<f64> = (0..10)
            .map(|i| i as f64 * 0.1)
            .chain((0..10).map(|i| 100.0 + i as f64 * 0.1))
            .collect();
        let mst = build_mst(20, |i, j| (pts[i] - pts[j]).abs());
        let tree = CondensedTree::from_mst(&mst, 20, 5).unwrap();
        assert_eq!(tree.root().children.len(), 2);
        assert_eq!(tree.clusters.len(), 3);
        let sizes: Vec<_> = tree.root().children.iter().map(|&c| tree.clusters[c].size).collect();
        assert_eq!(sizes, vec![10, 10]);
        for c in &tree.clusters {
            assert!(c.lambda_death >= c.lambda_birth);
            assert!(c.stability >= 0.0);
        }
    }

    #[test]
    fn min_cluster_size_above_n_gives_root_only() {
        let tree = CondensedTree::from_mst(&chain(6, 1.0), 6, 10).unwrap();
        assert_eq!(tree.clusters.len(), 1);
        assert!(tree.points.iter().all(|p| p.cluster == 0 && p.lambda == 1.0));
    }

    #[test]
    fn equal_weight_chain_never_splits() {
        // 9 points, mcs 5 > 9/2: both halves can never be big at once
        let tree = CondensedTree::from_mst(&chain(9, 0.5), 9, 5).unwrap();
        assert_eq!(tree.clusters.len(), 1);
        assert!(tree.root().children.is_empty());
        assert!(tree.points.iter().all(|p| p.lambda == 2.0));
        assert!((tree.root().stability - 9.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_edges_use_lambda_cap() {
        let edges = vec![
            MstEdge {
                a: 0,
                b: 1,
                weight: 0.0,
            },
            MstEdge {
                a: 1,
                b: 2,
                weight: 0.5,
            },
        ];
        let tree = CondensedTree::from_mst(&edges, 3, 2).unwrap();
        assert!((tree.lambda_cap - 1.0 / (0.5e-3)).abs() < 1e-9);
        assert!(tree.clusters.iter().all(|c| c.lambda_death.is_finite()));
    }

    #[test]
    fn rejects_non_spanning_input() {
        assert!(CondensedTree::from_mst(&chain(3, 1.0), 5, 2).is_err());
        assert!(CondensedTree::from_mst(&chain(3, 1.0), 3, 1).is_err());
    }
}
