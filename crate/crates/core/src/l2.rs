//! Least-squares fit of the max by a full-order estimator.
//!
//! For `x` uniform on the cube the sorted vector is uniform on the cone, so
//! its simplex coordinates `λ` (the spacings) are Dirichlet(1, …, 1). The max
//! is `Aᵀλ` with `A = 1 - e₁` and a subpool-order fit is `(Ξα)ᵀλ` with
//! `Ξ = K(d)ᵀ`, so the mean squared error after centring is the quadratic
//! form `(A - Ξα)ᵀ Σ (A - Ξα)` in the Dirichlet covariance `Σ`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::numeric::{dot, psd_project_residual, ratio, sub_vec, to_f64, Exact, ExactMatrix, NumericError};
use crate::subpool::{b_matrix, k_matrix, SubpoolError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum L2Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Subpool(#[from] SubpoolError),
}

/// Covariance of Dirichlet(1, …, 1) on `d + 1` components.
pub fn dirichlet_covariance(d: usize) -> ExactMatrix {
    let n = d as i64;
    let scale = (n + 1) * (n + 1) * (n + 2);
    let diag = ratio(n, scale);
    let off = ratio(-1, scale);
    ExactMatrix::from_fn(d + 1, d + 1, |i, j| if i == j { diag.clone() } else { off.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L2Report {
    pub d: usize,
    pub sigma: ExactMatrix,
    pub xi: ExactMatrix,
    /// Coefficients of `S(x; 1, d), …, S(x; d-1, d)`.
    pub alpha_star: Vec<Exact>,
    pub alpha0_star: Exact,
    /// Mean squared error over the cube.
    pub normalized_sq_error: Exact,
}

impl L2Report {
    fn target(&self) -> Vec<Exact> {
        (0..=self.d).map(|i| if i == 0 { Exact::zero() } else { Exact::one() }).collect()
    }

    /// `Ξᵀ Σ (A - Ξα)`; zero at the optimum.
    pub fn normal_residual(&self) -> Vec<Exact> {
        let resid = sub_vec(&self.target(), &self.xi.mul_vec(&self.alpha_star).expect("conforming"));
        self.xi.transpose().mul(&self.sigma).expect("conforming").mul_vec(&resid).expect("conforming")
    }

    /// Weight of each order statistic in the fitted estimator, `B(d)ᵀ α⋆`.
    pub fn order_loading(&self) -> Vec<Exact> {
        b_matrix(self.d).expect("d ≥ 2").vec_mul(&self.alpha_star).expect("conforming")
    }

    /// Estimator value at `x`, in floating point.
    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        let w: Vec<f64> = self.order_loading().iter().map(to_f64).collect();
        eval_loaded(to_f64(&self.alpha0_star), &w, &mut x.to_vec())
    }
}

fn eval_loaded(intercept: f64, weights: &[f64], x: &mut [f64]) -> f64 {
    x.sort_by(|a, b| b.total_cmp(a));
    intercept + weights.iter().zip(x.iter()).map(|(w, v)| w * v).sum::<f64>()
}

pub fn l2_optimal(d: usize) -> Result<L2Report, L2Error> {
    let sigma = dirichlet_covariance(d);
    let xi = k_matrix(d)?.transpose();
    let a: Vec<Exact> = (0..=d).map(|i| if i == 0 { Exact::zero() } else { Exact::one() }).collect();
    let proj = psd_project_residual(&a, &xi, &sigma)?;
    let resid = sub_vec(&a, &xi.mul_vec(&proj.alpha)?);
    let mean = vec![ratio(1, d as i64 + 1); d + 1];
    let alpha0_star = dot(&resid, &mean);
    Ok(L2Report {
        d,
        sigma,
        xi,
        alpha_star: proj.alpha,
        alpha0_star,
        normalized_sq_error: proj.residual_quadratic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub samples: usize,
    pub mean: f64,
    pub std_error: f64,
}

impl MonteCarlo {
    /// Whether `value` lies within `k` standard errors of the sample mean.
    pub fn agrees(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Sample mean squared error of the fitted estimator under uniform `x`.
pub fn monte_carlo_mse(report: &L2Report, samples: usize, seed: u64) -> MonteCarlo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = report.order_loading().iter().map(to_f64).collect();
    let intercept = to_f64(&report.alpha0_star);
    let mut x = vec![0.0; report.d];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = rng.random::<f64>());
        let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e = (max - eval_loaded(intercept, &weights, &mut x)).powi(2);
        sum += e;
        sum_sq += e * e;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    MonteCarlo { samples, mean, std_error: (var / n).sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn covariance_examples() {
        let s = dirichlet_covariance(1);
        assert_eq!(s.row(0), &[ratio(1, 12), ratio(-1, 12)]);
        assert_eq!(dirichlet_covariance(2)[(0, 0)], ratio(1, 18));
        for d in 1..8 {
            let s = dirichlet_covariance(d);
            assert!(s.is_symmetric());
            for i in 0..=d {
                assert!(s.row(i).iter().fold(Exact::zero(), |a, v| a + v).is_zero());
            }
        }
    }

    #[test]
    fn two_dimensional_fit() {
        let r = l2_optimal(2).unwrap();
        assert_eq!(r.alpha_star, vec![int(1)]);
        assert_eq!(r.alpha0_star, ratio(1, 6));
        assert_eq!(r.normalized_sq_error, ratio(1, 72));
        // E[(|x1 - x2|/2)^2] - (E|x1 - x2|/2)^2 = 1/24 - 1/36.
        assert_eq!(r.normalized_sq_error, ratio(1, 24) - ratio(1, 36));
    }

    #[test]
    fn positive_and_orthogonal() {
        for d in 2..=8 {
            let r = l2_optimal(d).unwrap();
            assert!(r.normalized_sq_error > Exact::zero(), "d = {d}");
            assert!(r.normal_residual().iter().all(Zero::is_zero), "d = {d}");
        }
    }

    #[test]
    fn monte_carlo_small() {
        let r = l2_optimal(2).unwrap();
        let mc = monte_carlo_mse(&r, 100_000, 7);
        assert!(mc.agrees(1.0 / 72.0, 4.0), "{mc:?}");
    }
}
