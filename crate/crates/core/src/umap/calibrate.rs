const MAX_ITERATIONS: usize = 64;
pub const CALIBRATION_TOLERANCE: f64 = 1e-5;
const SIGMA_FLOOR_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub rho: f64,
    pub sigma: f64,
    /// `sigma` was set to the floor because the target mass was unreachable
    /// (or the solution fell below the floor).
    pub clamped: bool,
    /// `|sum_j w_j - log2(k)|` at the returned sigma.
    pub residual: f64,
}

/// Directed membership strength `exp(-max(0, d - rho) / sigma)`.
///
/// Distances at or below `rho` have weight exactly 1 and never divide by
/// `sigma`, so a zero sigma is safe.
pub fn membership(distance: f64, rho: f64, sigma: f64) -> f64 {
    let excess = distance - rho;
    if excess <= 0.0 {
        1.0
    } else if sigma <= 0.0 {
        0.0
    } else {
        (-excess / sigma).exp()
    }
}

fn mass(row: &[f64], rho: f64, sigma: f64) -> f64 {
    row.iter().map(|&d| membership(d, rho, sigma)).sum()
}

/// Finds the local connectivity `rho` and bandwidth `sigma` for one row of
/// ascending neighbor distances.
///
/// `rho` is the smallest strictly positive distance (0 when every distance is
/// 0). `sigma` is bisected so the row's total membership equals `log2(k)`.
/// When that is impossible, or the root lies below
/// `1e-3 * mean(row)`, sigma is clamped to that floor.
pub fn smooth_knn_calibrate(row: &[f64], k: usize) -> Calibration {
    let target = (k as f64).log2();
    let rho = row.iter().copied().filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min);
    let rho = if rho.is_finite() { rho } else { 0.0 };
    let mean = if row.is_empty() {
        0.0
    } else {
        row.iter().sum::<f64>() / row.len() as f64
    };
    let floor = SIGMA_FLOOR_SCALE * mean;

    let clamp = |rho: f64| Calibration {
        rho,
        sigma: floor,
        clamped: true,
        residual: (mass(row, rho, floor) - target).abs(),
    };

    // mass(sigma) rises from #(d <= rho) at sigma -> 0 to row.len() as sigma -> inf
    let at_zero = row.iter().filter(|&&d| d <= rho).count() as f64;
    if at_zero >= target || (row.len() as f64) <= target {
        return clamp(rho);
    }

    let (mut lo, mut hi, mut sigma) = (0.0f64, f64::INFINITY, 1.0f64);
    let mut value = mass(row, rho, sigma);
    for _ in 0..MAX_ITERATIONS {
        if (value - target).abs() <= CALIBRATION_TOLERANCE {
            break;
        }
        if value > target {
            hi = sigma;
            sigma = (lo + hi) / 2.0;
        } else {
            lo = sigma;
            sigma = if hi.is_infinite() { sigma * 2.0 } else { (lo + hi) / 2.0 };
        }
        value = mass(row, rho, sigma);
    }
    if sigma < floor {
        return clamp(rho);
    }
    Calibration {
        rho,
        sigma,
        clamped: false,
        residual: (value - target).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solves_the_one_two_three_row() {
        // scipy brentq on 1 + e^{-1/s} + e^{-2/s} = log2(3)
        let c = smooth_knn_calibrate(&[1.0, 2.0, 3.0], 3);
        assert_eq!(c.rho, 1.0);
        assert!(!c.clamped);
        assert!((c.sigma - 1.133_192_814_389_570_4).abs() < 1e-4, "{}", c.sigma);
        assert!(c.residual <= CALIBRATION_TOLERANCE);
    }

    #[test]
    fn all_duplicates_clamp() {
        let c = smooth_knn_calibrate(&[0.0, 0.0, 0.0], 3);
        assert_eq!(c.rho, 0.0);
        assert!(c.clamped);
        assert_eq!(c.sigma, 0.0);
        assert_eq!(membership(0.0, c.rho, c.sigma), 1.0);
    }

    #[test]
    fn rho_skips_zero_distances() {
        let c = smooth_knn_calibrate(&[0.0, 0.5, 1.0, 2.0, 3.0, 4.0], 6);
        assert_eq!(c.rho, 0.5);
    }

    #[test]
    fn nearest_neighbor_weight_is_one() {
        for row in [[0.3, 0.4, 0.9, 1.5], [2.0, 2.0, 2.0, 7.0], [0.0, 0.0, 1.0, 2.0]] {
            let c = smooth_knn_calibrate(&row, 4);
            let first_positive = row.iter().copied().find(|&d| d > 0.0).unwrap();
            assert_eq!(membership(first_positive, c.rho, c.sigma), 1.0);
        }
    }

    #[test]
    fn small_k_is_clamped() {
        assert!(smooth_knn_calibrate(&[1.0], 1).clamped);
        assert!(smooth_knn_calibrate(&[1.0, 2.0], 2).clamped);
    }

    proptest! {
        #[test]
        fn residual_within_tolerance_when_unclamped(
            mut row in proptest::collection::vec(0.0f64..10.0, 3..40),
        ) {
            row.sort_by(f64::total_cmp);
            let k = row.len();
            let c = smooth_knn_calibrate(&row, k);
            prop_assert!(c.rho >= 0.0);
            prop_assert!(c.sigma >= 1e-3 * row.iter().sum::<f64>() / k as f64);
            if !c.clamped {
                let total: f64 = row.iter().map(|&d| membership(d, c.rho, c.sigma)).sum();
                prop_assert!((total - (k as f64).log2()).abs() <= CALIBRATION_TOLERANCE);
            }
        }
    }
}
