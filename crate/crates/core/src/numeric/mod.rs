//! Exact rational arithmetic, dense matrices, elimination and linear programming.

mod linsolve;
mod matrix;
mod minimax;
mod scalar;
mod simplex;

pub use linsolve::{psd_project_residual, rank, solve_linear_system, solve_with_free_zero, Projection};
pub use matrix::{dot, sub_vec, ExactMatrix};
pub use minimax::{lp_min_half_range, lp_minimax, max_abs, residuals, MinimaxCertificate, MinimaxFit, RangeFit};
pub use scalar::{
    binomial, binomial_ratio, format_decimal, format_exact, from_f64, int, parse_exact, ratio, to_f64, Both, Exact,
    ParseExactError,
};
pub use simplex::{Bound, LinearProgram, LpSolution, Sense};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent system: row {row} reduces to 0 = nonzero")]
    Inconsistent { row: usize },
    #[error("rank-deficient system (rank {rank}): column {column} has no pivot")]
    RankDeficient { column: usize, rank: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("optimality certificate rejected: {0}")]
    Certificate(String),
}
