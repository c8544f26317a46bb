//! Discrete Chebyshev (L∞) fitting as a linear program.

use num_traits::{Signed, Zero};

use super::matrix::dot;
use super::simplex::{Bound, LinearProgram, LpSolution, Sense};
use super::{Exact, ExactMatrix, NumericError};

/// Optimal `coeffs` minimising `max_i |target_i - features_i · coeffs|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaxFit {
    pub g: Exact,
    pub coeffs: Vec<Exact>,
    pub certificate: MinimaxCertificate,
}

/// Signed point weights `w` with `Σ|w| ≤ 1`, `Σ w_i features_i = 0` and
/// `Σ w_i target_i = g`. For any coefficients `c`,
/// `max_i |t_i - F_i c| ≥ Σ w_i (t_i - F_i c) = g`, so `g` is a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaxCertificate {
    pub weights: Vec<Exact>,
    pub pivots: usize,
}

pub fn residuals(targets: &[Exact], features: &ExactMatrix, coeffs: &[Exact]) -> Vec<Exact> {
    targets.iter().enumerate().map(|(i, t)| t - dot(features.row(i), coeffs)).collect()
}

pub fn max_abs(values: &[Exact]) -> Exact {
    values.iter().map(Signed::abs).max().unwrap_or_else(Exact::zero)
}

fn check_shape(targets: &[Exact], features: &ExactMatrix) -> Result<(), NumericError> {
    if targets.is_empty() {
        return Err(NumericError::Dimension("minimax fit needs at least one point".into()));
    }
    if features.rows() != targets.len() {
        return Err(NumericError::Dimension(format!(
            "{} targets but {} feature rows",
            targets.len(),
            features.rows()
        )));
    }
    Ok(())
}

fn minimax_program(targets: &[Exact], features: &ExactMatrix) -> LinearProgram {
    let (n, k) = (targets.len(), features.cols());
    let one = Exact::from_integer(1.into());
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for (i, t) in targets.iter().enumerate() {
        let f = features.row(i);
        rows.push(std::iter::once(-one.clone()).chain(f.iter().cloned()).collect::<Vec<_>>());
        rhs.push(t.clone());
        rows.push(std::iter::once(-one.clone()).chain(f.iter().map(|v| -v.clone())).collect());
        rhs.push(-t.clone());
    }
    let mut objective = vec![Exact::zero(); k + 1];
    objective[0] = one;
    let mut bounds = vec![Bound::Free; k + 1];
    bounds[0] = Bound::NonNegative;
    LinearProgram {
        objective,
        constraints: ExactMatrix::from_rows(rows).expect("rows share a width"),
        rhs,
        senses: vec![Sense::Le; 2 * n],
        bounds,
    }
}

/// Exact minimax fit: `g = min_c max_i |target_i - features_i · c|`.
pub fn lp_minimax(targets: &[Exact], features: &ExactMatrix) -> Result<MinimaxFit, NumericError> {
    check_shape(targets, features)?;
    let program = minimax_program(targets, features);
    let sol: LpSolution = program.solve()?;
    if let Err(why) = program.certify(&sol) {
        return Err(NumericError::Certificate(why));
    }
    let weights = (0..targets.len()).map(|i| &sol.duals[2 * i] - &sol.duals[2 * i + 1]).collect();
    let fit = MinimaxFit {
        g: sol.x[0].clone(),
        coeffs: sol.x[1..].to_vec(),
        certificate: MinimaxCertificate { weights, pivots: sol.pivots },
    };
    fit.verify(targets, features).map_err(NumericError::Certificate)?;
    Ok(fit)
}

impl MinimaxFit {
    /// Re-derives optimality from the fit and its certificate alone.
    pub fn verify(&self, targets: &[Exact], features: &ExactMatrix) -> Result<(), String> {
        let achieved = max_abs(&residuals(targets, features, &self.coeffs));
        if achieved != self.g {
            return Err(format!("claimed g = {} but residuals reach {}", self.g, achieved));
        }
        let w = &self.certificate.weights;
        if w.len() != targets.len() {
            return Err("certificate has the wrong length".into());
        }
        let mass: Exact = w.iter().map(Signed::abs).sum();
        if mass > Exact::from_integer(1.into()) {
            return Err(format!("certificate weights have total mass {mass} > 1"));
        }
        for c in 0..features.cols() {
            if !dot(&features.col(c), w).is_zero() {
                return Err(format!("certificate is not orthogonal to feature {}", c + 1));
            }
        }
        let bound = dot(targets, w);
        if bound != self.g {
            return Err(format!("certificate bounds g below by {bound}, not {}", self.g));
        }
        Ok(())
    }
}

/// Coefficients minimising the half-range `(max_i e_i - min_i e_i) / 2` of the
/// residuals `e = targets - features · c`; no intercept column is expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeFit {
    pub half_range: Exact,
    pub coeffs: Vec<Exact>,
}

pub fn lp_min_half_range(targets: &[Exact], features: &ExactMatrix) -> Result<RangeFit, NumericError> {
    check_shape(targets, features)?;
    let (n, k) = (targets.len(), features.cols());
    // variables: upper u, lower l, coefficients c (all free)
    let one = Exact::from_integer(1.into());
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for (i, t) in targets.iter().enumerate() {
        let f = features.row(i);
        // t - f·c ≤ u  →  -u - f·c ≤ -t
        let mut a = vec![-one.clone(), Exact::zero()];
        a.extend(f.iter().map(|v| -v.clone()));
        rows.push(a);
        rhs.push(-t.clone());
        // t - f·c ≥ l  →  l + f·c ≤ t
        let mut b = vec![Exact::zero(), one.clone()];
        b.extend(f.iter().cloned());
        rows.push(b);
        rhs.push(t.clone());
    }
    let half = Exact::new(1.into(), 2.into());
    let mut objective = vec![half.clone(), -half];
    objective.extend(std::iter::repeat_n(Exact::zero(), k));
    let program = LinearProgram {
        objective,
        constraints: ExactMatrix::from_rows(rows).expect("rows share a width"),
        rhs,
        senses: vec![Sense::Le; 2 * n],
        bounds: vec![Bound::Free; k + 2],
    };
    let sol = program.solve()?;
    program.certify(&sol).map_err(NumericError::Certificate)?;
    Ok(RangeFit { half_range: sol.value, coeffs: sol.x[2..].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn feats(rows: &[&[Exact]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn midpoint() {
        let fit = lp_minimax(&[int(1), int(0)], &feats(&[&[int(1)], &[int(1)]])).unwrap();
        assert_eq!(fit.g, ratio(1, 2));
        assert_eq!(fit.coeffs, vec![ratio(1, 2)]);
    }

    #[test]
    fn two_dimensional_intercept_and_mean() {
        let f = feats(&[&[int(1), int(0)], &[int(1), ratio(1, 2)], &[int(1), int(1)]]);
        let fit = lp_minimax(&[int(0), int(1), int(1)], &f).unwrap();
        assert_eq!(fit.g, ratio(1, 4));
        assert_eq!(fit.coeffs, vec![ratio(1, 4), int(1)]);
    }

    #[test]
    fn exactly_representable() {
        let f = feats(&[&[int(1)], &[int(1)], &[int(1)]]);
        let fit = lp_minimax(&[int(1), int(1), int(1)], &f).unwrap();
        assert!(fit.g.is_zero());
        assert_eq!(fit.coeffs, vec![int(1)]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(lp_minimax(&[], &ExactMatrix::zeros(0, 1)).is_err());
        assert!(lp_minimax(&[int(1)], &ExactMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn tampered_certificate_fails() {
        let f = feats(&[&[int(1), int(0)], &[int(1), ratio(1, 2)], &[int(1), int(1)]]);
        let t = [int(0), int(1), int(1)];
        let mut fit = lp_minimax(&t, &f).unwrap();
        fit.g = ratio(1, 5);
        assert!(fit.verify(&t, &f).is_err());
    }

    #[test]
    fn half_range_matches_intercept_fit() {
        let f = feats(&[&[int(0)], &[ratio(1, 2)], &[int(1)]]);
        let r = lp_min_half_range(&[int(0), int(1), int(1)], &f).unwrap();
        assert_eq!(r.half_range, ratio(1, 4));
    }
}
