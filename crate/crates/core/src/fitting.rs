//! Optimal symmetric estimators of the max built from averaged subpool maxes.
//!
//! A symmetric `R`-estimator is `β₀ + Σ_{r ∈ R∖{0}} β_r S(x; r, d)`. Over the
//! sorted cone its error `x_(1) - f(x)` is affine in the simplex coordinates
//! `λ` with `x = V(d) λ`, so the worst case is attained at one of the `d + 1`
//! cone vertices `(0,…,0), (1,0,…,0), …, (1,…,1)`. The vector of errors at
//! those vertices is the estimator's *error profile*.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::numeric::{
    binomial, lp_min_half_range, lp_minimax, max_abs, ratio, Exact, ExactMatrix, MinimaxCertificate, NumericError,
};
use crate::subpool::{k_matrix, order_statistics, weighted_order_sum, PoolScalar, SubpoolError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("invalid order set for d = {d}: {reason}")]
    InvalidOrders { d: usize, reason: String },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("input has length {got}, estimator expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the order set must contain 0 (an intercept)")]
    InterceptRequired,
    #[error("eps = {eps} must be below err/2 = {half_err}")]
    EpsilonTooLarge { eps: String, half_err: String },
    #[error("coefficient check failed: vertex profile {profile:?} does not reach max |error| = {expected}")]
    ProfileCheck { profile: Vec<String>, expected: String },
    #[error("the two intercept routes disagree: {0}")]
    RouteMismatch(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Subpool(#[from] SubpoolError),
}

/// A set `R ⊆ {0, …, d-1}` of subpool orders; `0` stands for the intercept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orders(BTreeSet<usize>);

impl Orders {
    pub fn new(orders: impl IntoIterator<Item = usize>) -> Self {
        Self(orders.into_iter().collect())
    }

    /// `{0, 1, …, d-1}`.
    pub fn full(d: usize) -> Self {
        Self::new(0..d)
    }

    pub fn contains(&self, r: usize) -> bool {
        self.0.contains(&r)
    }

    pub fn has_intercept(&self) -> bool {
        self.contains(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Orders excluding the intercept.
    pub fn subpool_orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.iter().filter(|&r| r > 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Orders) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn validate(&self, d: usize) -> Result<(), FitError> {
        if d < 2 {
            return Err(FitError::DimensionTooSmall(d));
        }
        if self.0.is_empty() {
            return Err(FitError::InvalidOrders { d, reason: "empty".into() });
        }
        if let Some(r) = self.iter().find(|&r| r >= d) {
            return Err(FitError::InvalidOrders { d, reason: format!("order {r} is not below d") });
        }
        Ok(())
    }

    /// Every nonempty subset of `{0, …, d-1}`, ordered by size then
    /// lexicographically.
    pub fn all_nonempty(d: usize) -> Vec<Orders> {
        let mut out: Vec<Orders> = (1u64..(1 << d)).map(|mask| Orders::new((0..d).filter(|i| mask >> i & 1 == 1))).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.iter().cmp(b.0.iter())));
        out
    }

    /// Comma-joined, e.g. `0,2`.
    pub fn joined(&self) -> String {
        self.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Orders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.joined())
    }
}

impl FromStr for Orders {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        body.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad order {t:?} in {s:?}")))
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Orders)
    }
}

/// A symmetric estimator `β₀ + Σ_r β_r S(x; r, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct REstimator {
    d: usize,
    intercept: Option<Exact>,
    betas: BTreeMap<usize, Exact>,
}

impl REstimator {
    pub fn new(d: usize, intercept: Option<Exact>, betas: BTreeMap<usize, Exact>) -> Result<Self, FitError> {
        let est = Self { d, intercept, betas };
        est.orders().validate(d)?;
        if est.betas.contains_key(&0) {
            return Err(FitError::InvalidOrders { d, reason: "order 0 is the intercept, not a subpool order".into() });
        }
        Ok(est)
    }

    /// The `{0, d-1}` estimator with `(β₀, β_{d-1}) = (1/(2d), 1)`.
    pub fn intercept_and_top(d: usize) -> Result<Self, FitError> {
        if d < 2 {
            return Err(FitError::DimensionTooSmall(d));
        }
        Self::new(d, Some(ratio(1, 2 * d as i64)), BTreeMap::from([(d - 1, Exact::one())]))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn orders(&self) -> Orders {
        Orders::new(self.intercept.iter().map(|_| 0).chain(self.betas.keys().copied()))
    }

    pub fn intercept(&self) -> Option<&Exact> {
        self.intercept.as_ref()
    }

    pub fn beta(&self, r: usize) -> Option<&Exact> {
        self.betas.get(&r)
    }

    pub fn betas(&self) -> &BTreeMap<usize, Exact> {
        &self.betas
    }

    /// `Σ_r β_r · (row r of K(d))`: the estimator without its intercept,
    /// evaluated at the `d + 1` cone vertices.
    pub fn vertex_loading(&self) -> Vec<Exact> {
        let k = k_matrix(self.d).expect("d >= 2 checked at construction");
        let mut out = vec![Exact::zero(); self.d + 1];
        for (&r, beta) in &self.betas {
            for (o, kv) in out.iter_mut().zip(k.row(r - 1)) {
                *o += beta * kv;
            }
        }
        out
    }

    /// Evaluates through the order-statistics form of `S(x; r, d)`.
    pub fn evaluate<T: PoolScalar>(&self, x: &[T]) -> Result<T, FitError> {
        if x.len() != self.d {
            return Err(FitError::LengthMismatch { expected: self.d, got: x.len() });
        }
        let sorted = order_statistics(x);
        let mut acc = self.intercept.as_ref().map_or_else(T::zero, T::from_exact);
        for (&r, beta) in &self.betas {
            acc = acc + T::from_exact(beta) * weighted_order_sum(&sorted, r);
        }
        Ok(acc)
    }

    /// Sum of `|β_r|` over subpool orders.
    pub fn beta_l1(&self) -> Exact {
        self.betas.values().map(Signed::abs).sum()
    }
}

/// `β₀ + Σ β_r S(x; r, d)` for a pool `x`.
pub fn evaluate_estimator<T: PoolScalar>(est: &REstimator, x: &[T]) -> Result<T, FitError> {
    est.evaluate(x)
}

/// `x_(1) - f(x)` at the cone vertices `λ = e_1, …, e_{d+1}`.
pub fn error_profile(est: &REstimator) -> Vec<Exact> {
    let b0 = est.intercept().cloned().unwrap_or_else(Exact::zero);
    est.vertex_loading()
        .into_iter()
        .enumerate()
        .map(|(c, load)| if c == 0 { -&b0 - load } else { Exact::one() - &b0 - load })
        .collect()
}

/// Best constant offset for a set of values and the resulting worst deviation:
/// `((γ_max + γ_min)/2, (γ_max - γ_min)/2)`.
pub fn chebyshev_center(gamma: &[Exact]) -> (Exact, Exact) {
    let hi = gamma.iter().max().cloned().unwrap_or_else(Exact::zero);
    let lo = gamma.iter().min().cloned().unwrap_or_else(Exact::zero);
    let two = Exact::from_integer(2.into());
    ((&hi + &lo) / &two, (hi - lo) / two)
}

/// Optimal estimator over an order set with its certified error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub estimator: REstimator,
    pub err: Exact,
    pub profile: Vec<Exact>,
    pub certificate: MinimaxCertificate,
}

/// Vertex points `k` ones followed by zeros, `k = 0..=d`.
fn vertex_points(d: usize) -> Vec<Vec<Exact>> {
    (0..=d).map(|k| (0..d).map(|i| Exact::from_integer(u8::from(i < k).into())).collect()).collect()
}

fn design(d: usize, orders: &Orders, intercept: bool) -> (Vec<Exact>, ExactMatrix) {
    let points = vertex_points(d);
    let targets = points.iter().map(|p| p[0].clone()).collect();
    let subpool: Vec<usize> = orders.subpool_orders().collect();
    let features = ExactMatrix::from_fn(d + 1, subpool.len() + usize::from(intercept), |i, c| {
        if intercept && c == 0 {
            Exact::one()
        } else {
            weighted_order_sum(&points[i], subpool[c - usize::from(intercept)])
        }
    });
    (targets, features)
}

/// Solves the minimax problem over the cone vertices exactly. With `0 ∈ R`
/// the intercept is a free LP variable.
pub fn fit_optimal(d: usize, orders: &Orders) -> Result<SolveReport, FitError> {
    orders.validate(d)?;
    let intercept = orders.has_intercept();
    let (targets, features) = design(d, orders, intercept);
    let fit = lp_minimax(&targets, &features)?;
    let mut coeffs = fit.coeffs.into_iter();
    let b0 = if intercept { coeffs.next() } else { None };
    let betas = orders.subpool_orders().zip(coeffs).collect();
    let estimator = REstimator::new(d, b0, betas)?;
    let profile = error_profile(&estimator);
    let err = max_abs(&profile);
    if err != fit.g {
        return Err(FitError::RouteMismatch(format!("LP value {} but vertex profile gives {err}", fit.g)));
    }
    Ok(SolveReport { estimator, err, profile, certificate: fit.certificate })
}

/// Second route for `0 ∈ R`: minimise the half-range of the uncentred profile
/// over `β`, then place `β₀` at the Chebyshev center of that profile.
pub fn fit_optimal_centered(d: usize, orders: &Orders) -> Result<(REstimator, Exact), FitError> {
    orders.validate(d)?;
    if !orders.has_intercept() {
        return Err(FitError::InterceptRequired);
    }
    let (targets, features) = design(d, orders, false);
    let fit = lp_min_half_range(&targets, &features)?;
    let uncentred = REstimator {
        d,
        intercept: Some(Exact::zero()),
        betas: orders.subpool_orders().zip(fit.coeffs).collect(),
    };
    let (b0, value) = chebyshev_center(&error_profile(&uncentred));
    if value != fit.half_range {
        return Err(FitError::RouteMismatch(format!("half-range {} but centred value {value}", fit.half_range)));
    }
    let est = REstimator { intercept: Some(b0), ..uncentred };
    Ok((est, value))
}

/// Known closed forms for the optimal error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Exact(Exact),
    UpperBound(Exact),
    NotCovered,
}

/// `1/(2d-1)` for `{d-1}`, `1/(2d)` for `{0, d-1}`, and the bound `1/2^d`
/// for the full order set.
pub fn closed_form_error(d: usize, orders: &Orders) -> ClosedForm {
    if d < 2 || orders.validate(d).is_err() {
        return ClosedForm::NotCovered;
    }
    let d_i = d as i64;
    if *orders == Orders::new([d - 1]) {
        ClosedForm::Exact(ratio(1, 2 * d_i - 1))
    } else if *orders == Orders::new([0, d - 1]) {
        ClosedForm::Exact(ratio(1, 2 * d_i))
    } else if *orders == Orders::full(d) {
        ClosedForm::UpperBound(pow2_recip(d))
    } else {
        ClosedForm::NotCovered
    }
}

fn pow2_recip(d: usize) -> Exact {
    Exact::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), d))
}

/// Full-order estimator with `β₀ = 1/2^d` and `β_r = -(-1/2)^{d-r} C(d, r)`.
/// Its vertex profile is checked to peak at exactly `1/2^d` before returning.
pub fn full_coefficients(d: usize) -> Result<REstimator, FitError> {
    if d < 2 {
        return Err(FitError::DimensionTooSmall(d));
    }
    let minus_half = ratio(-1, 2);
    let betas = (1..d)
        .map(|r| {
            let coef = -num_traits::pow(minus_half.clone(), d - r) * Exact::from_integer(binomial(d as u64, r as u64));
            (r, coef)
        })
        .collect();
    let est = REstimator::new(d, Some(pow2_recip(d)), betas)?;
    let profile = error_profile(&est);
    let expected = pow2_recip(d);
    if max_abs(&profile) != expected {
        return Err(FitError::ProfileCheck {
            profile: profile.iter().map(ToString::to_string).collect(),
            expected: expected.to_string(),
        });
    }
    Ok(est)
}

/// `(err(R)/2 - ε)^d`, a lower bound on the volume of the part of the unit
/// cube where the optimal `R`-estimator errs by at least `ε`.
pub fn measure_lower_bound(d: usize, orders: &Orders, eps: &Exact) -> Result<Exact, FitError> {
    orders.validate(d)?;
    if !orders.has_intercept() {
        return Err(FitError::InterceptRequired);
    }
    let report = fit_optimal(d, orders)?;
    measure_bound_from_err(d, &report.err, eps)
}

pub(crate) fn measure_bound_from_err(d: usize, err: &Exact, eps: &Exact) -> Result<Exact, FitError> {
    let half = err / Exact::from_integer(2.into());
    if *eps >= half {
        return Err(FitError::EpsilonTooLarge { eps: eps.to_string(), half_err: half.to_string() });
    }
    Ok(num_traits::pow(half - eps, d))
}

/// `(β₀ - ε)^d`: the cube `[0, β₀ - ε]^d` lies inside the region, since an
/// optimal estimator is nondecreasing and equals `β₀` at the origin.
pub fn intercept_measure_bound(report: &SolveReport, eps: &Exact) -> Option<Exact> {
    let b0 = report.estimator.intercept()?;
    (eps < b0).then(|| num_traits::pow(b0 - eps, report.estimator.d()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn orders(v: &[usize]) -> Orders {
        Orders::new(v.iter().copied())
    }

    #[test]
    fn fit_intercept_and_top_d3() {
        let rep = fit_optimal(3, &orders(&[0, 2])).unwrap();
        assert_eq!(rep.err, ratio(1, 6));
        assert_eq!(rep.estimator.intercept(), Some(&ratio(1, 6)));
        assert_eq!(rep.estimator.beta(2), Some(&int(1)));
    }

    #[test]
    fn fit_table_entries() {
        assert_eq!(fit_optimal(4, &orders(&[2, 3])).unwrap().err, ratio(1, 13));
        assert_eq!(fit_optimal(3, &orders(&[1, 2])).unwrap().err, ratio(1, 7));
        assert_eq!(fit_optimal(5, &orders(&[0])).unwrap().err, ratio(1, 2));
    }

    #[test]
    fn fit_rejects_bad_orders() {
        assert!(fit_optimal(3, &orders(&[])).is_err());
        assert!(fit_optimal(3, &orders(&[3])).is_err());
        assert!(fit_optimal(1, &orders(&[0])).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_error(3, &orders(&[2])), ClosedForm::Exact(ratio(1, 5)));
        assert_eq!(closed_form_error(4, &orders(&[0, 3])), ClosedForm::Exact(ratio(1, 8)));
        assert_eq!(closed_form_error(4, &Orders::full(4)), ClosedForm::UpperBound(ratio(1, 16)));
        assert_eq!(closed_form_error(4, &orders(&[1, 2])), ClosedForm::NotCovered);
    }

    #[test]
    fn full_coefficient_values() {
        let e2 = full_coefficients(2).unwrap();
        assert_eq!(e2.intercept(), Some(&ratio(1, 4)));
        assert_eq!(e2.beta(1), Some(&int(1)));
        let e3 = full_coefficients(3).unwrap();
        assert_eq!(e3.intercept(), Some(&ratio(1, 8)));
        assert_eq!(e3.beta(1), Some(&ratio(-3, 4)));
        assert_eq!(e3.beta(2), Some(&ratio(3, 2)));
        assert_eq!(max_abs(&error_profile(&full_coefficients(4).unwrap())), ratio(1, 16));
        let p3 = error_profile(&e3);
        assert_eq!(p3.iter().max().unwrap(), &ratio(1, 8));
        assert_eq!(p3.iter().min().unwrap(), &ratio(-1, 8));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_center(&[int(3), int(-1)]), (int(1), int(2)));
        assert_eq!(chebyshev_center(&vec![ratio(2, 3); 4]), (ratio(2, 3), int(0)));
        assert_eq!(
            chebyshev_center(&[int(0), ratio(3, 4), int(1), ratio(3, 4)]),
            (ratio(1, 2), ratio(1, 2))
        );
    }

    #[test]
    fn profile_examples() {
        let zero = REstimator::new(2, Some(int(0)), BTreeMap::new()).unwrap();
        assert_eq!(error_profile(&zero), vec![int(0), int(1), int(1)]);
        let est = REstimator::intercept_and_top(3).unwrap();
        assert_eq!(error_profile(&est), vec![ratio(-1, 6), ratio(1, 6), ratio(-1, 6), ratio(-1, 6)]);
    }

    #[test]
    fn evaluation_examples() {
        let est = REstimator::intercept_and_top(3).unwrap();
        assert_eq!(est.evaluate(&[int(1), int(0), int(0)]).unwrap(), ratio(5, 6));
        let constant = REstimator::new(4, Some(ratio(2, 7)), BTreeMap::new()).unwrap();
        assert_eq!(constant.evaluate(&[int(5), int(1), int(0), int(9)]).unwrap(), ratio(2, 7));
        let full2 = full_coefficients(2).unwrap();
        assert_eq!(full2.evaluate(&[int(1), int(1)]).unwrap(), ratio(5, 4));
        assert!(est.evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn measure_bounds() {
        assert_eq!(measure_lower_bound(2, &orders(&[0, 1]), &ratio(1, 16)).unwrap(), ratio(1, 256));
        assert_eq!(measure_lower_bound(3, &orders(&[0, 2]), &ratio(1, 24)).unwrap(), ratio(1, 13824));
        assert!(matches!(
            measure_lower_bound(2, &orders(&[0, 1]), &ratio(1, 8)),
            Err(FitError::EpsilonTooLarge { .. })
        ));
        let near = measure_lower_bound(2, &orders(&[0, 1]), &ratio(1249, 10000)).unwrap();
        assert!(near < ratio(1, 1_000_000));
        assert!(matches!(measure_lower_bound(2, &orders(&[1]), &int(0)), Err(FitError::InterceptRequired)));
    }

    #[test]
    fn centred_route_agrees() {
        for d in 2..=5 {
            for r in Orders::all_nonempty(d).into_iter().filter(Orders::has_intercept) {
                let direct = fit_optimal(d, &r).unwrap();
                let (est, value) = fit_optimal_centered(d, &r).unwrap();
                assert_eq!(value, direct.err, "d={d} R={r}");
                assert_eq!(max_abs(&error_profile(&est)), direct.err);
            }
        }
    }

    #[test]
    fn orders_parse_and_display() {
        let r: Orders = "0,2".parse().unwrap();
        assert_eq!(r, orders(&[0, 2]));
        assert_eq!(r.to_string(), "{0,2}");
        assert_eq!("{1, 3}".parse::<Orders>().unwrap(), orders(&[1, 3]));
        assert!("a".parse::<Orders>().is_err());
        assert_eq!(Orders::all_nonempty(3).len(), 7);
    }
}
