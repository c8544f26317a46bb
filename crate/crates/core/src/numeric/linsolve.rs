//! Exact Gauss-Jordan elimination and the weighted least-squares projection.

use num_traits::{Signed, Zero};

use super::matrix::{dot, sub_vec};
use super::{Exact, ExactMatrix, NumericError};

/// Reduced row echelon form of `[A | b]`, remembering where each row came from.
struct Echelon {
    rows: Vec<Vec<Exact>>,
    rhs: Vec<Exact>,
    origin: Vec<usize>,
    /// `pivots[k]` is the column of the k-th pivot row.
    pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(a: &ExactMatrix, b: &[Exact]) -> Result<Self, NumericError> {
        if a.rows() != b.len() {
            return Err(NumericError::Dimension(format!(
                "matrix has {} rows but right-hand side has {} entries",
                a.rows(),
                b.len()
            )));
        }
        let mut rows = a.row_vecs();
        let mut rhs = b.to_vec();
        let mut origin: Vec<usize> = (0..a.rows()).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..a.cols() {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(next, p);
            rhs.swap(next, p);
            origin.swap(next, p);
            let inv = rows[next][col].recip();
            for v in rows[next].iter_mut() {
                *v *= &inv;
            }
            rhs[next] *= &inv;
            for r in 0..rows.len() {
                if r == next || rows[r][col].is_zero() {
                    continue;
                }
                let factor = rows[r][col].clone();
                let pivot_row = rows[next].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *v -= &factor * p;
                    }
                }
                let delta = &factor * &rhs[next];
                rhs[r] -= delta;
            }
            pivots.push(col);
            next += 1;
        }
        Ok(Self { rows, rhs, origin, pivots })
    }

    /// First (in original numbering, 1-based) row reduced to `0 = nonzero`.
    fn contradiction(&self) -> Option<usize> {
        (self.pivots.len()..self.rows.len())
            .filter(|&r| !self.rhs[r].is_zero())
            .map(|r| self.origin[r] + 1)
            .min()
    }

    /// Solution with every non-pivot variable fixed at zero.
    fn particular(&self, cols: usize) -> Vec<Exact> {
        let mut x = vec![Exact::zero(); cols];
        for (k, &c) in self.pivots.iter().enumerate() {
            x[c] = self.rhs[k].clone();
        }
        x
    }
}

/// Solves `Ax = b` exactly, requiring a unique solution.
pub fn solve_linear_system(a: &ExactMatrix, b: &[Exact]) -> Result<Vec<Exact>, NumericError> {
    if a.rows() < a.cols() {
        return Err(NumericError::Dimension(format!(
            "underdetermined system: {} rows for {} unknowns",
            a.rows(),
            a.cols()
        )));
    }
    let ech = Echelon::reduce(a, b)?;
    if let Some(row) = ech.contradiction() {
        return Err(NumericError::Inconsistent { row });
    }
    if let Some(column) = (0..a.cols()).find(|c| !ech.pivots.contains(c)) {
        return Err(NumericError::RankDeficient { column: column + 1, rank: ech.pivots.len() });
    }
    Ok(ech.particular(a.cols()))
}

/// Any solution of a consistent system, free variables set to zero.
pub fn solve_with_free_zero(a: &ExactMatrix, b: &[Exact]) -> Result<Vec<Exact>, NumericError> {
    let ech = Echelon::reduce(a, b)?;
    if let Some(row) = ech.contradiction() {
        return Err(NumericError::Inconsistent { row });
    }
    Ok(ech.particular(a.cols()))
}

/// Rank by exact elimination.
pub fn rank(a: &ExactMatrix) -> usize {
    let zeros = vec![Exact::zero(); a.rows()];
    Echelon::reduce(a, &zeros).map(|e| e.pivots.len()).unwrap_or(0)
}

/// Result of projecting a target onto a column space under a PSD weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub alpha: Vec<Exact>,
    /// `(A - Xi alpha)ᵀ Sigma (A - Xi alpha)`.
    pub residual_quadratic: Exact,
}

/// Minimises `(A - Xi alpha)ᵀ Sigma (A - Xi alpha)` through the normal
/// equations `(XiᵀΣXi) alpha = XiᵀΣA`. When those are singular any solution is
/// returned; the residual does not depend on which.
pub fn psd_project_residual(a: &[Exact], xi: &ExactMatrix, sigma: &ExactMatrix) -> Result<Projection, NumericError> {
    let n = a.len();
    if xi.rows() != n || sigma.rows() != n || sigma.cols() != n {
        return Err(NumericError::Dimension(format!(
            "target has length {n}, features are {}x{}, weight is {}x{}",
            xi.rows(),
            xi.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    if !sigma.is_symmetric() {
        return Err(NumericError::Dimension("weight matrix is not symmetric".into()));
    }
    let xt_sigma = xi.transpose().mul(sigma)?;
    let normal = xt_sigma.mul(xi)?;
    let moment = xt_sigma.mul_vec(a)?;
    let alpha = solve_with_free_zero(&normal, &moment)?;
    let resid = sub_vec(a, &xi.mul_vec(&alpha)?);
    let residual_quadratic = dot(&resid, &sigma.mul_vec(&resid)?);
    if residual_quadratic.is_negative() {
        return Err(NumericError::Dimension("weight matrix is not positive semidefinite".into()));
    }
    Ok(Projection { alpha, residual_quadratic })
}
