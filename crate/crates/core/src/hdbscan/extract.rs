use serde::Serialize;

use super::condense::CondensedTree;

/// Flat cluster labels. `-1` is noise; topics are numbered by descending
/// size, ties broken by smallest member index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicAssignment {
    pub labels: Vec<i32>,
    pub n_topics: usize,
    pub noise_count: usize,
    /// Condensed-tree cluster id behind each topic.
    pub selected_clusters: Vec<usize>,
}

impl TopicAssignment {
    pub fn topic_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_topics];
        for &l in &self.labels {
            if l >= 0 {
                sizes[l as usize] += 1;
            }
        }
        sizes
    }

    /// Points with the given label, in index order.
    pub fn members(&self, topic: i32) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == topic)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Excess-of-mass selection over the condensed tree.
///
/// Walking bottom up, a cluster is selected when its own stability strictly
/// exceeds the best total stability of selected clusters below it; selecting
/// it deselects its descendants. The root takes part only when
/// `allow_single_cluster` is set.
pub fn select_clusters(tree: &CondensedTree, allow_single_cluster: bool) -> Vec<usize> {
    let m = tree.clusters.len();
    let mut selected = vec![false; m];
    let mut best = vec![0.0f64; m];
    // children have larger ids than parents
    for c in (0..m).rev() {
        let node = &tree.clusters[c];
        let below: f64 = node.children.iter().map(|&ch| best[ch]).sum();
        let eligible = node.parent.is_some() || allow_single_cluster;
        if eligible && node.stability > below {
            selected[c] = true;
            best[c] = node.stability;
            let mut stack = node.children.clone();
            while let Some(d) = stack.pop() {
                selected[d] = false;
                stack.extend(tree.clusters[d].children.iter().copied());
            }
        } else {
            best[c] = below;
        }
    }
    (0..m).filter(|&c| selected[c]).collect()
}

/// Labels every point by the selected cluster among its ancestors, if any.
///
/// When the root itself is selected, points that left the root directly keep
/// the label only if they left at or after the largest lambda recorded
/// directly under the root; earlier leavers are noise.
pub fn label_points(tree: &CondensedTree, selected: &[usize]) -> TopicAssignment {
    let m = tree.clusters.len();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for c in 0..m {
        owner[c] = if selected.contains(&c) {
            Some(c)
        } else {
            tree.clusters[c].parent.and_then(|p| owner[p])
        };
    }

    let root_threshold = if selected.contains(&0) {
        let from_points = tree.points.iter().filter(|p| p.cluster == 0).map(|p| p.lambda);
        let from_children = tree.root().children.iter().map(|&c| tree.clusters[c].lambda_birth);
        from_points.chain(from_children).fold(f64::NEG_INFINITY, f64::max)
    } else {
        f64::NEG_INFINITY
    };

    let raw: Vec<Option<usize>> = tree
        .points
        .iter()
        .map(|p| {
            let c = owner[p.cluster]?;
            if c == 0 && p.cluster == 0 && p.lambda < root_threshold {
                None
            } else {
                Some(c)
            }
        })
        .collect();

    // order: size descending, then smallest member index
    let mut stats: Vec<(usize, usize, usize)> = selected.iter().map(|&c| (c, 0usize, usize::MAX)).collect();
    for (i, r) in raw.iter().enumerate() {
        if let Some(c) = r {
            let s = stats.iter_mut().find(|s| s.0 == *c).expect("selected");
            s.1 += 1;
            s.2 = s.2.min(i);
        }
    }
    stats.retain(|s| s.1 > 0);
    stats.sort_by(|x, y| y.1.cmp(&x.1).then(x.2.cmp(&y.2)));

    let labels: Vec<i32> = raw
        .iter()
        .map(|r| match r {
            Some(c) => stats.iter().position(|s| s.0 == *c).expect("ranked") as i32,
            None => -1,
        })
        .collect();
    let noise_count = labels.iter().filter(|&&l| l < 0).count();
    TopicAssignment {
        n_topics: stats.len(),
        noise_count,
        selected_clusters: stats.iter().map(|s| s.0).collect(),
        labels,
    }
}
