//! Brute-force and sampling checks that do not go through the LP.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fitting::{error_profile, REstimator};
use crate::numeric::{max_abs, ratio, to_f64, Exact};
use crate::subpool::{combination_rank, order_weight};

/// Largest grid `n^d` that [`grid_error`] will visit.
pub const GRID_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("grid of {n}^{d} points exceeds the budget of {GRID_BUDGET}")]
    Budget { n: usize, d: usize },
    #[error("grid resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
}

impl OracleConfig {
    pub fn new(n: usize, samples: usize, seed: u64) -> Result<Self, OracleError> {
        if n < 2 {
            return Err(OracleError::Resolution(n));
        }
        if samples == 0 {
            return Err(OracleError::NoSamples);
        }
        Ok(Self { n, samples, seed })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n: 51, samples: 100_000, seed: 0 }
    }
}

/// Exact L∞ error over the cube: the largest vertex error on the sorted cone.
pub fn vertex_error(est: &REstimator) -> Exact {
    max_abs(&error_profile(est))
}

/// Float evaluator with the order-statistic weights folded once.
struct Flat {
    intercept: f64,
    weights: Vec<f64>,
    sorted: Vec<f64>,
}

impl Flat {
    fn new(est: &REstimator) -> Self {
        let d = est.d();
        let mut weights = vec![Exact::zero(); d];
        for (&r, beta) in est.betas() {
            for (j, w) in weights.iter_mut().enumerate().take(d - r + 1) {
                *w += beta * order_weight(j + 1, r, d);
            }
        }
        Self {
            intercept: est.intercept().map_or(0.0, to_f64),
            weights: weights.iter().map(to_f64).collect(),
            sorted: vec![0.0; d],
        }
    }

    fn error(&mut self, x: &[f64]) -> f64 {
        self.sorted.copy_from_slice(x);
        self.sorted.sort_by(|a, b| b.total_cmp(a));
        let f = self.intercept + self.weights.iter().zip(&self.sorted).map(|(w, v)| w * v).sum::<f64>();
        (self.sorted[0] - f).abs()
    }
}

/// `(1 + Σ|β_r|) / 2`: `vertex_error - grid_error ≤ lipschitz_gap / (n - 1)`.
///
/// Every grid cell point is within `1/(2(n-1))` of a grid node in the sup
/// norm, and `x ↦ x_(1) - f(x)` is `(1 + Σ|β_r|)`-Lipschitz in that norm.
pub fn lipschitz_gap(est: &REstimator) -> Exact {
    (est.beta_l1() + Exact::from_integer(1.into())) * ratio(1, 2)
}

/// Largest error over the grid `{0, 1/(n-1), …, 1}^d`.
pub fn grid_error(est: &REstimator, n: usize) -> Result<f64, OracleError> {
    let d = est.d();
    if n < 2 {
        return Err(OracleError::Resolution(n));
    }
    if (n as u128).checked_pow(d as u32).is_none_or(|total| total > GRID_BUDGET) {
        return Err(OracleError::Budget { n, d });
    }
    let mut flat = Flat::new(est);
    let step = 1.0 / (n - 1) as f64;
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut worst: f64 = 0.0;
    loop {
        for (v, &i) in x.iter_mut().zip(&idx) {
            *v = i as f64 * step;
        }
        worst = worst.max(flat.error(&x));
        let mut k = 0;
        loop {
            if k == d {
                return Ok(worst);
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RandomError {
    pub samples: usize,
    pub max_error: f64,
    /// Fraction of samples whose error is at least the requested threshold.
    pub fraction_at_least: Option<f64>,
}

/// Error over `samples` uniform points drawn from a seeded stream.
pub fn random_error(est: &REstimator, samples: usize, seed: u64, eps: Option<f64>) -> Result<RandomError, OracleError> {
    if samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Flat::new(est);
    let mut x = vec![0.0; est.d()];
    let mut worst: f64 = 0.0;
    let mut hits = 0usize;
    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = rng.random::<f64>());
        let e = flat.error(&x);
        worst = worst.max(e);
        if eps.is_some_and(|t| e >= t) {
            hits += 1;
        }
    }
    Ok(RandomError { samples, max_error: worst, fraction_at_least: eps.map(|_| hits as f64 / samples as f64) })
}

/// Lexicographic rank (1-based) of the subset holding the `r` largest
/// coordinates when those coordinates, read in decreasing value, also have
/// increasing indices. `None` on ties or when the indices are out of order.
pub fn sliver_classify(x: &[f64], r: usize) -> Option<u128> {
    let d = x.len();
    if r == 0 || r > d {
        return None;
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    if order.windows(2).any(|w| x[w[0]] == x[w[1]]) {
        return None;
    }
    let top = &order[..r];
    if top.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let subset: Vec<usize> = top.iter().map(|i| i + 1).collect();
    combination_rank(&subset, d).ok().map(|s| s.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coverage {
    pub samples: usize,
    pub fraction: f64,
    /// Binomial standard error of `fraction` around the predicted `1/r!`.
    pub std_error: f64,
    pub predicted: f64,
}

/// Fraction of uniform samples that land in some sliver.
pub fn sliver_coverage(d: usize, r: usize, samples: usize, seed: u64) -> Result<Coverage, OracleError> {
    if d < 2 || r == 0 || r >= d {
        return Err(OracleError::Dimension(d));
    }
    if samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = rng.random::<f64>());
        if sliver_classify(&x, r).is_some() {
            hits += 1;
        }
    }
    let predicted = 1.0 / (1..=r).map(|k| k as f64).product::<f64>();
    Ok(Coverage {
        samples,
        fraction: hits as f64 / samples as f64,
        std_error: (predicted * (1.0 - predicted) / samples as f64).sqrt(),
        predicted,
    })
}

/// Rationals with numerators in `-1000..=1000` and denominators in
/// `1..=1000`; roughly one coordinate in eight repeats an earlier one so that
/// ties occur.
pub fn random_rationals<R: Rng>(rng: &mut R, len: usize) -> Vec<Exact> {
    let mut out: Vec<Exact> = Vec::with_capacity(len);
    for i in 0..len {
        if i > 0 && rng.random_ratio(1, 8) {
            let j = rng.random_range(0..i);
            out.push(out[j].clone());
        } else {
            out.push(ratio(rng.random_range(-1000..=1000), rng.random_range(1..=1000)));
        }
    }
    out
}

fn relu(v: Exact) -> Exact {
    if v.is_negative() {
        Exact::zero()
    } else {
        v
    }
}

/// `(relu(a-b) + relu(b-a) + a + b) / 2`.
pub fn max2_closed(a: &Exact, b: &Exact) -> Exact {
    (relu(a - b) + relu(b - a) + a + b) * ratio(1, 2)
}

/// Three-way max as a ratio of absolute differences. All-equal inputs
/// return the common value.
pub fn max3_closed(x1: &Exact, x2: &Exact, x3: &Exact) -> Exact {
    let d12 = (x1 - x2).abs();
    let d13 = (x1 - x3).abs();
    let d23 = (x2 - x3).abs();
    let total = &d12 + &d13 + &d23;
    if total.is_zero() {
        return x1.clone();
    }
    let weighted = x1 * (&d12 + &d13) + x2 * (&d12 + &d23) + x3 * (&d23 + &d13);
    weighted / &total * ratio(1, 2) + total * ratio(1, 4)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::fitting::full_coefficients;
    use crate::numeric::int;

    fn est(d: usize, b0: Exact, betas: &[(usize, Exact)]) -> REstimator {
        REstimator::new(d, Some(b0), betas.iter().cloned().collect()).unwrap()
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(vertex_error(&est(3, ratio(1, 6), &[(2, int(1))])), ratio(1, 6));
        let zero = REstimator::new(3, Some(int(0)), BTreeMap::new()).unwrap();
        assert_eq!(vertex_error(&zero), int(1));
        assert_eq!(vertex_error(&full_coefficients(4).unwrap()), ratio(1, 16));
    }

    #[test]
    fn grid_examples() {
        let e2 = est(2, ratio(1, 4), &[(1, int(1))]);
        let g = grid_error(&e2, 101).unwrap();
        assert!((0.24..=0.25 + 1e-12).contains(&g), "{g}");
        let e3 = est(3, ratio(1, 6), &[(2, int(1))]);
        let g = grid_error(&e3, 51).unwrap();
        assert!((0.16..=1.0 / 6.0 + 1e-12).contains(&g), "{g}");
        assert!(grid_error(&e3, 1).is_err());
        assert_eq!(grid_error(&est(9, int(0), &[(8, int(1))]), 10), Err(OracleError::Budget { n: 10, d: 9 }));
    }

    #[test]
    fn random_examples() {
        let e2 = est(2, ratio(1, 4), &[(1, int(1))]);
        let r = random_error(&e2, 100_000, 3, Some(0.125)).unwrap();
        assert!(r.max_error <= 0.25 + 1e-12 && r.max_error >= 0.2, "{r:?}");
        assert!(r.fraction_at_least.unwrap() > 0.0);
        let one = random_error(&e2, 1, 11, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..2).map(|_| rng.random::<f64>()).collect();
        let expect = (x[0].max(x[1]) - e2.evaluate(&x).unwrap()).abs();
        assert!((one.max_error - expect).abs() < 1e-15);
        assert!(random_error(&e2, 0, 0, None).is_err());
    }

    #[test]
    fn sliver_examples() {
        assert_eq!(sliver_classify(&[0.9, 0.5, 0.1], 2), Some(1));
        assert_eq!(sliver_classify(&[0.5, 0.9, 0.1], 2), None);
        assert_eq!(sliver_classify(&[0.1, 0.9, 0.5], 2), Some(3));
        assert_eq!(sliver_classify(&[0.5, 0.5, 0.1], 2), None);
        let c = sliver_coverage(4, 2, 100_000, 1).unwrap();
        assert!((c.fraction - 0.5).abs() <= 3.0 * c.std_error, "{c:?}");
        let c = sliver_coverage(4, 1, 1_000, 1).unwrap();
        assert_eq!(c.fraction, 1.0);
    }

    #[test]
    fn closed_form_maxes() {
        assert_eq!(max2_closed(&int(3), &int(5)), int(5));
        assert_eq!(max2_closed(&int(-2), &int(-2)), int(-2));
        assert_eq!(max3_closed(&int(0), &int(0), &int(1)), int(1));
        assert_eq!(max3_closed(&ratio(2, 3), &ratio(2, 3), &ratio(2, 3)), ratio(2, 3));
        assert_eq!(max3_closed(&int(1), &int(2), &int(3)), int(3));
        assert_eq!(lipschitz_gap(&est(2, ratio(1, 4), &[(1, int(1))])), int(1));
    }
}
