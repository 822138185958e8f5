use rayon::prelude::*;

use super::HdbscanError;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Distance from each point to its `k`-th nearest other point (the point
/// itself is not counted).
pub fn core_distances(points: &[f64], dim: usize, k: usize) -> Result<Vec<f64>, HdbscanError> {
    let n = points.len().checked_div(dim).unwrap_or(0);
    if k == 0 {
        return Err(HdbscanError::InvalidParams("min_samples must be at least 1".into()));
    }
    if n <= k {
        return Err(HdbscanError::TooFewPoints { n, k });
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let p = &points[i * dim..(i + 1) * dim];
            let mut d: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| euclidean(p, &points[j * dim..(j + 1) * dim]))
                .collect();
            let (_, kth, _) = d.select_nth_unstable_by(k - 1, f64::total_cmp);
            *kth
        })
        .collect())
}

/// `max(d(a, b), core(a), core(b))`.
pub fn mutual_reachability(distance: f64, core_a: f64, core_b: f64) -> f64 {
    distance.max(core_a).max(core_b)
}

/// Points plus core distances, queried lazily as a mutual-reachability
/// metric.
#[derive(Debug, Clone)]
pub struct MutualReachability<'a> {
    points: &'a [f64],
    dim: usize,
    pub core: Vec<f64>,
}

impl<'a> MutualReachability<'a> {
    pub fn new(points: &'a [f64], dim: usize, min_samples: usize) -> Result<Self, HdbscanError> {
        let core = core_distances(points, dim, min_samples)?;
        Ok(Self { points, dim, core })
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let d = euclidean(
            &self.points[a * self.dim..(a + 1) * self.dim],
            &self.points[b * self.dim..(b + 1) * self.dim],
        );
        mutual_reachability(d, self.core[a], self.core[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn line_fixture() {
        assert_eq!(core_distances(&[0.0, 1.0, 3.0], 1, 2).unwrap(), vec![3.0, 2.0, 3.0]);
        assert_eq!(core_distances(&[0.0, 1.0, 3.0], 1, 1).unwrap(), vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn identical_points() {
        assert_eq!(core_distances(&[2.0; 8], 2, 3).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            core_distances(&[0.0, 1.0], 1, 2),
            Err(HdbscanError::TooFewPoints { n: 2, k: 2 })
        ));
    }

    #[test]
    fn max_rule() {
        assert_eq!(mutual_reachability(5.0, 1.0, 2.0), 5.0);
        assert_eq!(mutual_reachability(1.0, 3.0, 2.0), 3.0);
        assert_eq!(mutual_reachability(0.0, 0.0, 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn mutual_reachability_is_max(d in 0.0f64..100.0, a in 0.0f64..100.0, b in 0.0f64..100.0) {
            let m = mutual_reachability(d, a, b);
            prop_assert_eq!(m, [d, a, b].into_iter().fold(f64::MIN, f64::max));
            prop_assert_eq!(m, mutual_reachability(d, b, a));
        }

        #[test]
        fn core_distance_monotone_in_k(pts in proptest::collection::vec(-5.0f64..5.0, 20..40)) {
            let n = pts.len() / 2;
            let mut prev = vec![0.0; n];
            for k in 1..n {
                let core = core_distances(&pts[..n * 2], 2, k).unwrap();
                for (c, p) in core.iter().zip(&prev) {
                    prop_assert!(c >= p);
                }
                prev = core;
            }
        }

        #[test]
        fn mreach_dominates_base_distance(pts in proptest::collection::vec(-5.0f64..5.0, 12..30)) {
            let n = pts.len() / 3;
            let m = MutualReachability::new(&pts[..n * 3], 3, 2).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let d = euclidean(&pts[a * 3..a * 3 + 3], &pts[b * 3..b * 3 + 3]);
                    prop_assert_eq!(m.distance(a, b), m.distance(b, a));
                    prop_assert!(m.distance(a, b) >= d);
                    prop_assert!(m.distance(a, b) >= m.core[a]);
                }
            }
        }
    }
}
