//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Problems here have a few dozen rows at most, so the tableau is dense and
//! carries the artificial columns through phase two: they hold `B⁻¹`, from
//! which the dual solution is read off at termination.

use num_traits::{Signed, Zero};

use super::matrix::dot;
use super::{Exact, ExactMatrix, NumericError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

/// `minimize cᵀx` subject to `a_i x (sense_i) b_i` and per-variable bounds.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Exact>,
    pub constraints: ExactMatrix,
    pub rhs: Vec<Exact>,
    pub senses: Vec<Sense>,
    pub bounds: Vec<Bound>,
}

/// Primal and dual optimum. Duals follow the convention `y_i ≤ 0` for `≤`
/// rows and `y_i ≥ 0` for `≥` rows, so that `bᵀy` equals the optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Exact,
    pub x: Vec<Exact>,
    pub duals: Vec<Exact>,
    pub pivots: usize,
}

enum Column {
    Pos(usize),
    Neg(usize),
    Slack,
    Artificial,
}

struct Tableau {
    t: Vec<Vec<Exact>>,
    obj: Vec<Exact>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.t[row].clone();
        let eliminate = |target: &mut Vec<Exact>| {
            let f = target[col].clone();
            if f.is_zero() {
                return;
            }
            for (v, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        };
        for (r, line) in self.t.iter_mut().enumerate() {
            if r != row {
                eliminate(line);
            }
        }
        eliminate(&mut self.obj);
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs Bland's rule until optimal; `allowed` filters entering columns.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Result<(), NumericError> {
        let rhs = self.width();
        loop {
            let Some(col) = (0..rhs).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Exact)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[r][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((row, _)) = best else {
                return Err(NumericError::Unbounded);
            };
            self.pivot(row, col);
        }
    }

    fn load_costs(&mut self, costs: &[Exact]) {
        let w = self.width();
        for j in 0..=w {
            let base = if j < w { costs[j].clone() } else { Exact::zero() };
            let mut acc = base;
            for (r, &b) in self.basis.iter().enumerate() {
                if !costs[b].is_zero() {
                    acc -= &costs[b] * &self.t[r][j];
                }
            }
            self.obj[j] = acc;
        }
    }
}

impl LinearProgram {
    fn check(&self) -> Result<(), NumericError> {
        let (m, n) = (self.constraints.rows(), self.constraints.cols());
        if self.objective.len() != n || self.bounds.len() != n || self.rhs.len() != m || self.senses.len() != m {
            return Err(NumericError::Dimension(format!(
                "linear program with {m}x{n} constraints has {} costs, {} bounds, {} right-hand sides, {} senses",
                self.objective.len(),
                self.bounds.len(),
                self.rhs.len(),
                self.senses.len()
            )));
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution, NumericError> {
        self.check()?;
        let (m, n) = (self.constraints.rows(), self.constraints.cols());

        let mut columns = Vec::new();
        for (j, b) in self.bounds.iter().enumerate() {
            columns.push(Column::Pos(j));
            if *b == Bound::Free {
                columns.push(Column::Neg(j));
            }
        }
        let first_slack = columns.len();
        let slack_rows: Vec<usize> = (0..m).filter(|&i| self.senses[i] != Sense::Eq).collect();
        columns.extend(slack_rows.iter().map(|_| Column::Slack));
        let first_art = columns.len();
        columns.extend((0..m).map(|_| Column::Artificial));
        let width = columns.len();

        let mut sign = vec![1i32; m];
        let mut t = Vec::with_capacity(m);
        for i in 0..m {
            let mut line = vec![Exact::zero(); width + 1];
            for (k, col) in columns[..first_slack].iter().enumerate() {
                line[k] = match col {
                    Column::Pos(j) => self.constraints[(i, *j)].clone(),
                    Column::Neg(j) => -self.constraints[(i, *j)].clone(),
                    _ => unreachable!(),
                };
            }
            if let Some(s) = slack_rows.iter().position(|&r| r == i) {
                line[first_slack + s] = match self.senses[i] {
                    Sense::Le => Exact::from_integer(1.into()),
                    _ => Exact::from_integer((-1).into()),
                };
            }
            line[width] = self.rhs[i].clone();
            if self.rhs[i].is_negative() {
                sign[i] = -1;
                for v in line.iter_mut() {
                    *v = -v.clone();
                }
            }
            line[first_art + i] = Exact::from_integer(1.into());
            t.push(line);
        }
        let mut tab = Tableau {
            t,
            obj: vec![Exact::zero(); width + 1],
            basis: (first_art..first_art + m).collect(),
            pivots: 0,
        };

        let phase1: Vec<Exact> = (0..width).map(|k| if k >= first_art { 1.into() } else { 0.into() }).map(Exact::from_integer).collect();
        tab.load_costs(&phase1);
        tab.optimize(|_| true)?;
        if !tab.obj[width].is_zero() {
            return Err(NumericError::Infeasible);
        }
        for r in 0..m {
            if tab.basis[r] >= first_art {
                if let Some(col) = (0..first_art).find(|&j| !tab.t[r][j].is_zero()) {
                    tab.pivot(r, col);
                }
            }
        }

        let costs: Vec<Exact> = columns
            .iter()
            .map(|c| match c {
                Column::Pos(j) => self.objective[*j].clone(),
                Column::Neg(j) => -self.objective[*j].clone(),
                _ => Exact::zero(),
            })
            .collect();
        tab.load_costs(&costs);
        tab.optimize(|j| j < first_art)?;

        let mut std_x = vec![Exact::zero(); width];
        for (r, &b) in tab.basis.iter().enumerate() {
            std_x[b] = tab.t[r][width].clone();
        }
        let mut x = vec![Exact::zero(); n];
        for (k, col) in columns[..first_slack].iter().enumerate() {
            match col {
                Column::Pos(j) => x[*j] += &std_x[k],
                Column::Neg(j) => x[*j] -= &std_x[k],
                _ => unreachable!(),
            }
        }
        let duals = (0..m)
            .map(|i| {
                let mut y = Exact::zero();
                for (r, &b) in tab.basis.iter().enumerate() {
                    if !costs[b].is_zero() {
                        y += &costs[b] * &tab.t[r][first_art + i];
                    }
                }
                if sign[i] < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let value = dot(&self.objective, &x);
        Ok(LpSolution { value, x, duals, pivots: tab.pivots })
    }

    /// Checks primal feasibility, dual feasibility and a zero duality gap
    /// for a claimed optimum, independently of how it was produced.
    pub fn certify(&self, sol: &LpSolution) -> Result<(), String> {
        self.check().map_err(|e| e.to_string())?;
        let (m, n) = (self.constraints.rows(), self.constraints.cols());
        if sol.x.len() != n || sol.duals.len() != m {
            return Err("solution has the wrong shape".into());
        }
        for i in 0..m {
            let lhs = dot(self.constraints.row(i), &sol.x);
            let ok = match self.senses[i] {
                Sense::Le => lhs <= self.rhs[i],
                Sense::Ge => lhs >= self.rhs[i],
                Sense::Eq => lhs == self.rhs[i],
            };
            if !ok {
                return Err(format!("row {} violated", i + 1));
            }
            let y = &sol.duals[i];
            let sign_ok = match self.senses[i] {
                Sense::Le => !y.is_positive(),
                Sense::Ge => !y.is_negative(),
                Sense::Eq => true,
            };
            if !sign_ok {
                return Err(format!("dual {} has the wrong sign", i + 1));
            }
        }
        for j in 0..n {
            if sol.x[j].is_negative() && self.bounds[j] == Bound::NonNegative {
                return Err(format!("variable {} below its bound", j + 1));
            }
            let aty = dot(&self.constraints.col(j), &sol.duals);
            let ok = match self.bounds[j] {
                Bound::Free => aty == self.objective[j],
                Bound::NonNegative => aty <= self.objective[j],
            };
            if !ok {
                return Err(format!("reduced cost of variable {} is infeasible", j + 1));
            }
        }
        let primal = dot(&self.objective, &sol.x);
        let dual = dot(&self.rhs, &sol.duals);
        if primal != dual {
            return Err(format!("duality gap: primal {primal}, dual {dual}"));
        }
        Ok(())
    }
}
