//! Subpool maxes and their averages.
//!
//! Subsets of `{1, …, d}` are 1-based throughout and ranked lexicographically,
//! so `C(1, 2, 3) = {1, 2}`, `C(2, 2, 3) = {1, 3}`, `C(3, 2, 3) = {2, 3}`.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};

use crate::numeric::{binomial, binomial_ratio, to_f64, Exact, ExactMatrix};

/// Enumeration paths refuse to visit more subsets than this.
pub const ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubpoolError {
    #[error("subset rank {rank} is outside 1..={count} for size {size} of {ground}")]
    RankOutOfRange { rank: u128, size: usize, ground: usize, count: u128 },
    #[error("subset size {size} is outside 1..={ground}")]
    SizeOutOfRange { size: usize, ground: usize },
    #[error("subpool is empty")]
    EmptySubpool,
    #[error("index {index} is outside 1..={ground}")]
    IndexOutOfRange { index: usize, ground: usize },
    #[error("subset {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("enumeration of {count} subsets exceeds the cap of {ENUMERATION_CAP}")]
    TooLarge { count: u128 },
    #[error("dimension {d} is too small (need at least {min})")]
    DimensionTooSmall { d: usize, min: usize },
    #[error("value {value} is not a sorted point of the unit cube")]
    NotInCone { value: String },
}

/// Values a pool may hold: exact rationals on certified paths, binary floats
/// on sampling paths.
pub trait PoolScalar:
    Clone + PartialOrd + Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_exact(x: &Exact) -> Self;
}

impl PoolScalar for Exact {
    fn from_exact(x: &Exact) -> Self {
        x.clone()
    }
}

impl PoolScalar for f64 {
    fn from_exact(x: &Exact) -> Self {
        to_f64(x)
    }
}

pub(crate) fn choose(n: usize, k: usize) -> u128 {
    binomial(n as u64, k as u64).to_u128().expect("binomial coefficient fits in u128")
}

/// Position of a size-`size` subset of `{1..ground}` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsetIndex {
    rank: u128,
    size: usize,
    ground: usize,
}

impl SubsetIndex {
    pub fn new(rank: u128, size: usize, ground: usize) -> Result<Self, SubpoolError> {
        if size == 0 || size > ground {
            return Err(SubpoolError::SizeOutOfRange { size, ground });
        }
        let count = choose(ground, size);
        if rank == 0 || rank > count {
            return Err(SubpoolError::RankOutOfRange { rank, size, ground, count });
        }
        Ok(Self { rank, size, ground })
    }

    pub fn rank(&self) -> u128 {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ground(&self) -> usize {
        self.ground
    }
}

/// The subset at `idx`, as strictly increasing 1-based indices.
pub fn combination_unrank(idx: SubsetIndex) -> Vec<usize> {
    let SubsetIndex { rank, size, ground } = idx;
    let mut remaining = rank - 1;
    let mut out = Vec::with_capacity(size);
    let mut candidate = 1;
    while out.len() < size {
        let after = choose(ground - candidate, size - out.len() - 1);
        if remaining < after {
            out.push(candidate);
        } else {
            remaining -= after;
        }
        candidate += 1;
    }
    out
}

/// Inverse of [`combination_unrank`].
pub fn combination_rank(subset: &[usize], ground: usize) -> Result<SubsetIndex, SubpoolError> {
    validate_subset(subset, ground)?;
    if !subset.windows(2).all(|w| w[0] < w[1]) {
        return Err(SubpoolError::NotIncreasing(subset.to_vec()));
    }
    let size = subset.len();
    let mut rank = 0u128;
    let mut prev = 0;
    for (pos, &c) in subset.iter().enumerate() {
        for skipped in prev + 1..c {
            rank += choose(ground - skipped, size - pos - 1);
        }
        prev = c;
    }
    SubsetIndex::new(rank + 1, size, ground)
}

fn validate_subset(subset: &[usize], ground: usize) -> Result<(), SubpoolError> {
    if subset.is_empty() {
        return Err(SubpoolError::EmptySubpool);
    }
    if let Some(&index) = subset.iter().find(|&&i| i == 0 || i > ground) {
        return Err(SubpoolError::IndexOutOfRange { index, ground });
    }
    Ok(())
}

fn larger<T: PoolScalar>(a: T, b: &T) -> T {
    if *b > a {
        b.clone()
    } else {
        a
    }
}

/// `s(x; R) = max { x_j : j ∈ R }` with 1-based `R`.
pub fn subpool_max<T: PoolScalar>(x: &[T], subset: &[usize]) -> Result<T, SubpoolError> {
    validate_subset(subset, x.len())?;
    let first = x[subset[0] - 1].clone();
    Ok(subset[1..].iter().fold(first, |m, &j| larger(m, &x[j - 1])))
}

fn check_order(r: usize, d: usize) -> Result<(), SubpoolError> {
    if r == 0 || r > d {
        Err(SubpoolError::SizeOutOfRange { size: r, ground: d })
    } else {
        Ok(())
    }
}

/// Values sorted in decreasing order, `x_(1) ≥ x_(2) ≥ …`.
pub fn order_statistics<T: PoolScalar>(x: &[T]) -> Vec<T> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    v
}

/// `S(x; r, d)` by visiting all `C(d, r)` subpools.
pub fn avg_subpool_max_direct<T: PoolScalar>(x: &[T], r: usize) -> Result<T, SubpoolError> {
    let d = x.len();
    check_order(r, d)?;
    let count = choose(d, r);
    if count > ENUMERATION_CAP {
        return Err(SubpoolError::TooLarge { count });
    }
    let mut total = T::zero();
    for subset in (0..d).combinations(r) {
        let m = subset[1..].iter().fold(x[subset[0]].clone(), |m, &j| larger(m, &x[j]));
        total = total + m;
    }
    Ok(total / T::from_exact(&Exact::from_integer(binomial(d as u64, r as u64))))
}

/// Weight of `x_(j)` (1-based) in `S(x; r, d)`: `C(d-j, r-1) / C(d, r)`.
pub fn order_weight(j: usize, r: usize, d: usize) -> Exact {
    binomial_ratio((d - j) as u64, (r - 1) as u64, d as u64, r as u64)
}

/// `S(x; r, d)` as a weighted sum of order statistics.
pub fn avg_subpool_max_orderstat<T: PoolScalar>(x: &[T], r: usize) -> Result<T, SubpoolError> {
    let d = x.len();
    check_order(r, d)?;
    Ok(weighted_order_sum(&order_statistics(x), r))
}

/// Same as [`avg_subpool_max_orderstat`] for input already sorted decreasingly.
pub fn weighted_order_sum<T: PoolScalar>(sorted: &[T], r: usize) -> T {
    let d = sorted.len();
    let mut acc = T::zero();
    for (j, value) in sorted.iter().enumerate().take(d - r + 1) {
        acc = acc + T::from_exact(&order_weight(j + 1, r, d)) * value.clone();
    }
    acc
}

/// `B(d)`: row `r` maps the order statistics to `S(x; r, d)`, for `r = 1..d-1`.
pub fn b_matrix(d: usize) -> Result<ExactMatrix, SubpoolError> {
    if d < 2 {
        return Err(SubpoolError::DimensionTooSmall { d, min: 2 });
    }
    Ok(ExactMatrix::from_fn(d - 1, d, |r0, c0| {
        let (r, c) = (r0 + 1, c0 + 1);
        if r + c <= d + 1 {
            order_weight(c, r, d)
        } else {
            Exact::zero()
        }
    }))
}

/// `V(d)`: columns are the vertices of the sorted cone `1 ≥ y_1 ≥ … ≥ y_d ≥ 0`.
pub fn v_matrix(d: usize) -> Result<ExactMatrix, SubpoolError> {
    if d < 1 {
        return Err(SubpoolError::DimensionTooSmall { d, min: 1 });
    }
    Ok(ExactMatrix::from_fn(d, d + 1, |i, c| Exact::from_integer(u8::from(c > i).into())))
}

/// `K(d) = B(d) V(d)`.
pub fn k_matrix(d: usize) -> Result<ExactMatrix, SubpoolError> {
    Ok(b_matrix(d)?.mul(&v_matrix(d)?).expect("B(d) and V(d) conform"))
}

/// Simplex coordinates `λ` with `V(d) λ = y` for a decreasing `y ∈ [0,1]^d`.
pub fn v_coordinates(sorted: &[Exact]) -> Result<Vec<Exact>, SubpoolError> {
    let one = Exact::from_integer(1.into());
    let d = sorted.len();
    if d == 0 {
        return Err(SubpoolError::DimensionTooSmall { d, min: 1 });
    }
    let mut lambda = Vec::with_capacity(d + 1);
    lambda.push(&one - &sorted[0]);
    for w in sorted.windows(2) {
        lambda.push(&w[0] - &w[1]);
    }
    lambda.push(sorted[d - 1].clone());
    if let Some(bad) = lambda.iter().find(|l| *l < &Exact::zero()) {
        return Err(SubpoolError::NotInCone { value: bad.to_string() });
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Exact> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn unrank_examples() {
        let at = |j, r, d| combination_unrank(SubsetIndex::new(j, r, d).unwrap());
        assert_eq!(at(1, 2, 3), vec![1, 2]);
        assert_eq!(at(2, 2, 3), vec![1, 3]);
        assert_eq!(at(3, 2, 3), vec![2, 3]);
        assert_eq!(at(1, 5, 5), vec![1, 2, 3, 4, 5]);
        assert!(SubsetIndex::new(4, 2, 3).is_err());
        assert!(SubsetIndex::new(0, 2, 3).is_err());
        assert!(SubsetIndex::new(1, 4, 3).is_err());
    }

    #[test]
    fn rank_round_trip() {
        for d in 1..=7 {
            for r in 1..=d {
                for j in 1..=choose(d, r) {
                    let s = combination_unrank(SubsetIndex::new(j, r, d).unwrap());
                    assert_eq!(combination_rank(&s, d).unwrap().rank(), j);
                }
            }
        }
        assert!(combination_rank(&[2, 1], 3).is_err());
    }

    #[test]
    fn subpool_max_examples() {
        let x = ints(&[3, 2, 10, 5]);
        assert_eq!(subpool_max(&x, &[1, 2, 4]).unwrap(), int(5));
        assert_eq!(subpool_max(&x, &[1, 2, 3, 4]).unwrap(), int(10));
        assert_eq!(subpool_max(&ints(&[7, 7, 7]), &[2, 3]).unwrap(), int(7));
        assert_eq!(subpool_max(&x, &[]), Err(SubpoolError::EmptySubpool));
        assert!(subpool_max(&x, &[5]).is_err());
    }

    #[test]
    fn averaged_maxes() {
        let x = ints(&[3, 2, 10, 5]);
        assert_eq!(avg_subpool_max_direct(&x, 3).unwrap(), ratio(35, 4));
        assert_eq!(avg_subpool_max_orderstat(&x, 3).unwrap(), ratio(35, 4));
        assert_eq!(avg_subpool_max_direct(&x, 1).unwrap(), ratio(20, 4));
        assert_eq!(avg_subpool_max_orderstat(&x, 4).unwrap(), int(10));
        assert!(avg_subpool_max_direct(&x, 0).is_err());
        assert!(avg_subpool_max_orderstat(&x, 5).is_err());
    }

    #[test]
    fn order_d_minus_one_closed_form() {
        for d in 2..=8usize {
            let mut x = vec![int(0); d];
            x[0] = int(1);
            let s = avg_subpool_max_orderstat(&x, d - 1).unwrap();
            assert_eq!(s, ratio(d as i64 - 1, d as i64));
            let y: Vec<Exact> = (0..d).map(|i| ratio(i as i64 * 3 % 7, 7)).collect();
            let sorted = order_statistics(&y);
            let expect = (int(d as i64 - 1) * &sorted[0] + &sorted[1]) / int(d as i64);
            assert_eq!(avg_subpool_max_orderstat(&y, d - 1).unwrap(), expect);
        }
    }

    #[test]
    fn enumeration_cap() {
        let x = vec![0.0f64; 30];
        assert!(matches!(avg_subpool_max_direct(&x, 15), Err(SubpoolError::TooLarge { .. })));
        assert_eq!(avg_subpool_max_orderstat(&x, 15).unwrap(), 0.0);
    }

    #[test]
    fn matrices_small() {
        let b3 = b_matrix(3).unwrap();
        assert_eq!(b3.row(0), &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert_eq!(b3.row(1), &[ratio(2, 3), ratio(1, 3), int(0)]);
        assert_eq!(b_matrix(2).unwrap().row(0), &[ratio(1, 2), ratio(1, 2)]);
        assert!(b_matrix(1).is_err());

        let v2 = v_matrix(2).unwrap();
        assert_eq!(v2.row(0), &ints(&[0, 1, 1])[..]);
        assert_eq!(v2.row(1), &ints(&[0, 0, 1])[..]);

        assert_eq!(k_matrix(2).unwrap().row(0), &[int(0), ratio(1, 2), int(1)]);
        assert_eq!(k_matrix(3).unwrap().row(0), &[int(0), ratio(1, 3), ratio(2, 3), int(1)]);
    }

    #[test]
    fn matrix_structure() {
        for d in 2..=10 {
            let b = b_matrix(d).unwrap();
            let one = int(1);
            for r in 0..d - 1 {
                let sum: Exact = b.row(r).iter().sum();
                assert!(sum <= one);
                if r == 0 {
                    assert_eq!(sum, one);
                }
            }
            let v = v_matrix(d).unwrap();
            assert!(v.col(0).iter().all(Zero::is_zero));
            assert!(v.col(d).iter().all(|e| *e == one));
            assert!(k_matrix(d).unwrap().col(0).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn v_coordinates_reconstruct() {
        let y = vec![ratio(9, 10), ratio(1, 2), ratio(1, 2), ratio(1, 10)];
        let lambda = v_coordinates(&y).unwrap();
        assert_eq!(lambda.iter().sum::<Exact>(), int(1));
        assert_eq!(v_matrix(4).unwrap().mul_vec(&lambda).unwrap(), y);
        assert!(v_coordinates(&[ratio(1, 3), ratio(1, 2)]).is_err());
    }
}
