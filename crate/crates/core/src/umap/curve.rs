use super::UmapError;

const SAMPLES: usize = 300;
const MAX_RESIDUAL: f64 = 0.1;

/// Parameters of the low-dimensional similarity curve `1 / (1 + a x^(2b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFit {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square error against the reference curve.
    pub residual: f64,
}

pub fn reference_curve(x: f64, min_dist: f64, spread: f64) -> f64 {
    if x <= min_dist {
        1.0
    } else {
        (-(x - min_dist) / spread).exp()
    }
}

pub fn similarity(x: f64, a: f64, b: f64) -> f64 {
    1.0 / (1.0 + a * x.powf(2.0 * b))
}

/// Least-squares fit of the similarity curve to the offset exponential
/// reference, sampled at 300 evenly spaced points on `[0, 3 * spread]`.
/// Solved with Levenberg-Marquardt from `(a, b) = (1, 1)`.
pub fn fit_curve(min_dist: f64, spread: f64) -> Result<CurveFit, UmapError> {
    if !(min_dist >= 0.0 && spread > 0.0) {
        return Err(UmapError::InvalidParams(format!(
            "curve fit needs min_dist >= 0 and spread > 0, got {min_dist}, {spread}"
        )));
    }
    let step = 3.0 * spread / (SAMPLES - 1) as f64;
    let xs: Vec<f64> = (0..SAMPLES).map(|i| i as f64 * step).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| reference_curve(x, min_dist, spread)).collect();

    let sse = |a: f64, b: f64| -> f64 {
        xs.iter()
            .zip(&ys)
            .map(|(&x, &y)| (similarity(x, a, b) - y).powi(2))
            .sum()
    };

    let (mut a, mut b) = (1.0f64, 1.0f64);
    let mut cost = sse(a, b);
    let mut damping = 1e-3;
    for _ in 0..500 {
        // normal equations J^T J and J^T r for the 2-parameter model
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&x, &y) in xs.iter().zip(&ys) {
            let u = if x > 0.0 { x.powf(2.0 * b) } else { 0.0 };
            let denom = (1.0 + a * u).powi(2);
            let da = -u / denom;
            let db = if x > 0.0 { -2.0 * a * u * x.ln() / denom } else { 0.0 };
            let r = similarity(x, a, b) - y;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        let mut improved = false;
        while damping < 1e12 {
            let (m00, m11) = (jaa * (1.0 + damping), jbb * (1.0 + damping));
            let det = m00 * m11 - jab * jab;
            if det.abs() < f64::MIN_POSITIVE {
                damping *= 10.0;
                continue;
            }
            let step_a = -(m11 * ga - jab * gb) / det;
            let step_b = -(m00 * gb - jab * ga) / det;
            let (na, nb) = (a + step_a, b + step_b);
            if na > 0.0 && nb > 0.0 {
                let new_cost = sse(na, nb);
                if new_cost < cost {
                    let rel = (cost - new_cost) / cost.max(f64::MIN_POSITIVE);
                    a = na;
                    b = nb;
                    cost = new_cost;
                    damping = (damping / 10.0).max(1e-12);
                    improved = rel > 1e-15;
                    break;
                }
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let residual = (cost / SAMPLES as f64).sqrt();
    if !residual.is_finite() || residual > MAX_RESIDUAL {
        return Err(UmapError::FitDiverged { residual });
    }
    Ok(CurveFit { a, b, residual })
}
