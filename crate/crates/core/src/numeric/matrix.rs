use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use super::{Exact, NumericError};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Exact>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Exact::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Exact::from_integer(1.into());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Exact) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Exact>>) -> Result<Self, NumericError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(NumericError::Dimension(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// A single column.
    pub fn column(values: Vec<Exact>) -> Self {
        Self { rows: values.len(), cols: 1, data: values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Exact] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Exact> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Exact>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<Self, NumericError> {
        if self.cols != rhs.rows {
            return Err(NumericError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Exact]) -> Result<Vec<Exact>, NumericError> {
        if self.cols != v.len() {
            return Err(NumericError::Dimension(format!(
                "cannot multiply {}x{} by a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// `vᵀ M`.
    pub fn vec_mul(&self, v: &[Exact]) -> Result<Vec<Exact>, NumericError> {
        if self.rows != v.len() {
            return Err(NumericError::Dimension(format!(
                "cannot multiply a vector of length {} by {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Exact::zero(); self.cols];
        for (r, w) in v.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += w * a;
            }
        }
        Ok(out)
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self[(rows[r], c)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Exact;

    fn index(&self, (r, c): (usize, usize)) -> &Exact {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Exact {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Exact], b: &[Exact]) -> Exact {
    let mut acc = Exact::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `a - b` componentwise.
pub fn sub_vec(a: &[Exact], b: &[Exact]) -> Vec<Exact> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 2)]]).unwrap();
        let b = ExactMatrix::from_rows(vec![
            vec![ratio(0, 1), ratio(1, 1), ratio(1, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)],
        ])
        .unwrap();
        let k = a.mul(&b).unwrap();
        assert_eq!(k.row(0), &[ratio(0, 1), ratio(1, 2), ratio(1, 1)]);
        assert_eq!(k.transpose().cols(), 1);
        assert!(b.mul(&a).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ExactMatrix::from_rows(vec![vec![ratio(1, 1)], vec![]]).unwrap_err();
        assert!(matches!(err, NumericError::Dimension(_)));
    }
}
