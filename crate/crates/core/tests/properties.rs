use std::collections::BTreeSet;

use maxapprox::fitting::{error_profile, fit_optimal, Orders, REstimator};
use maxapprox::networks::{d1_estimator_network, heaviside_gate, pairwise_max_network, tuple_schedule};
use maxapprox::numeric::{
    binomial, int, psd_project_residual, ratio, solve_linear_system, Exact, ExactMatrix,
};
use maxapprox::oracles::{max2_closed, max3_closed, sliver_classify, vertex_error};
use maxapprox::subpool::{
    avg_subpool_max_direct, avg_subpool_max_orderstat, combination_rank, combination_unrank, k_matrix,
    order_statistics, order_weight, subpool_max, v_coordinates, SubsetIndex,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Exact> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| ratio(p, q))
}

fn unit() -> impl Strategy<Value = Exact> {
    (0i64..=1000).prop_map(|p| ratio(p, 1000))
}

fn pool(max_len: usize) -> impl Strategy<Value = Vec<Exact>> {
    prop::collection::vec(rational(), 2..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orderstat_form_matches_enumeration(x in pool(8), r_seed in 0usize..8) {
        let r = 1 + r_seed % x.len();
        prop_assert_eq!(avg_subpool_max_direct(&x, r).unwrap(), avg_subpool_max_orderstat(&x, r).unwrap());
    }

    #[test]
    fn averaged_max_is_monotone_in_order(x in pool(7)) {
        let top = order_statistics(&x)[0].clone();
        let values: Vec<Exact> = (1..=x.len()).map(|r| avg_subpool_max_direct(&x, r).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(values.last().unwrap(), &top);
    }

    #[test]
    fn k_matrix_maps_simplex_coordinates(y in prop::collection::vec(unit(), 2..=7)) {
        let sorted = order_statistics(&y);
        let lambda = v_coordinates(&sorted).unwrap();
        prop_assert!(lambda.iter().all(|l| !l.is_negative()));
        prop_assert_eq!(lambda.iter().sum::<Exact>(), int(1));
        let s = k_matrix(sorted.len()).unwrap().mul_vec(&lambda).unwrap();
        for (r, v) in s.iter().enumerate() {
            prop_assert_eq!(v, &avg_subpool_max_orderstat(&sorted, r + 1).unwrap());
        }
    }

    #[test]
    fn rank_inverts_unrank(d in 1usize..=12, r_seed in 0usize..12, j_seed in 0u128..10_000) {
        let r = 1 + r_seed % d;
        let total = binomial(d as u64, r as u64).try_into().unwrap_or(u128::MAX);
        let j = 1 + j_seed % total;
        let subset = combination_unrank(SubsetIndex::new(j, r, d).unwrap());
        prop_assert_eq!(combination_rank(&subset, d).unwrap().rank(), j);
    }

    #[test]
    fn pairwise_network_is_exact(x in pool(20)) {
        let net = pairwise_max_network(x.len()).unwrap();
        prop_assert_eq!(&net.forward(&x).unwrap()[0], x.iter().max().unwrap());
    }

    #[test]
    fn d1_network_matches_subpool_sum(x in prop::collection::vec(rational(), 3..=9)) {
        let d = x.len();
        let net = d1_estimator_network(d).unwrap();
        let mut want = ratio(1, 2 * d as i64);
        for drop in 1..=d {
            let subset: Vec<usize> = (1..=d).filter(|&i| i != drop).collect();
            want += subpool_max(&x, &subset).unwrap() * ratio(1, d as i64);
        }
        prop_assert_eq!(net.forward(&x).unwrap()[0].clone(), want);
    }

    #[test]
    fn heaviside_biconditional(x in pool(6), xi in rational(), pick in any::<bool>()) {
        let xi = if pick { x[0].clone() } else { xi };
        let out = heaviside_gate(x.len(), &xi).unwrap().forward(&x).unwrap()[0].clone();
        prop_assert_eq!(!out.is_positive(), x.iter().max().unwrap() <= &xi);
    }

    #[test]
    fn closed_form_maxes(a in rational(), b in rational(), c in rational(), tie in 0usize..4) {
        let (b, c) = match tie {
            1 => (a.clone(), c),
            2 => (b.clone(), b),
            3 => (a.clone(), a.clone()),
            _ => (b, c),
        };
        prop_assert_eq!(max2_closed(&a, &b), a.clone().max(b.clone()));
        prop_assert_eq!(max3_closed(&a, &b, &c), a.clone().max(b.clone()).max(c.clone()));
    }

    #[test]
    fn sliver_subset_is_top_r(x in prop::collection::vec(0.0f64..1.0, 3..=7), r_seed in 0usize..7) {
        let r = 1 + r_seed % (x.len() - 1);
        if let Some(k) = sliver_classify(&x, r) {
            let subset = combination_unrank(SubsetIndex::new(k, r, x.len()).unwrap());
            let mut order: Vec<usize> = (0..x.len()).collect();
            order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
            let top: BTreeSet<usize> = order[..r].iter().map(|i| i + 1).collect();
            prop_assert_eq!(subset.into_iter().collect::<BTreeSet<_>>(), top);
        }
    }

    #[test]
    fn linear_solve_is_exact(entries in prop::collection::vec(rational(), 9), b in prop::collection::vec(rational(), 3)) {
        let a = ExactMatrix::from_fn(3, 3, |i, j| entries[3 * i + j].clone());
        if let Ok(x) = solve_linear_system(&a, &b) {
            prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn projection_residual(cols in prop::collection::vec(rational(), 8), coef in prop::collection::vec(rational(), 2)) {
        let xi = ExactMatrix::from_fn(4, 2, |i, j| cols[2 * i + j].clone());
        let sigma = ExactMatrix::from_fn(4, 4, |i, j| if i == j { int(2) } else { int(-1) / int(2) });
        let inside = xi.mul_vec(&coef).unwrap();
        let p = psd_project_residual(&inside, &xi, &sigma).unwrap();
        prop_assert!(p.residual_quadratic.is_zero());
        let other: Vec<Exact> = inside.iter().enumerate().map(|(i, v)| v + int(i as i64)).collect();
        prop_assert!(!psd_project_residual(&other, &xi, &sigma).unwrap().residual_quadratic.is_negative());
    }
}

#[test]
fn order_weights_normalise() {
    for d in 1..=20usize {
        for r in 1..=d {
            let total: Exact = (1..=d - r + 1).map(|j| order_weight(j, r, d)).sum();
            assert_eq!(total, int(1), "d = {d}, r = {r}");
        }
    }
}

#[test]
fn unrank_enumerates_in_lexicographic_order() {
    for d in 1..=9usize {
        for r in 1..=d {
            let n: u128 = binomial(d as u64, r as u64).try_into().unwrap();
            let all: Vec<Vec<usize>> = (1..=n).map(|j| combination_unrank(SubsetIndex::new(j, r, d).unwrap())).collect();
            assert!(all.windows(2).all(|w| w[0] < w[1]), "d = {d}, r = {r}");
            assert!(all.iter().all(|s| s.windows(2).all(|p| p[0] < p[1])));
        }
    }
}

fn active_derivative_nonnegative(d: usize, orders: &Orders) {
    let rep = fit_optimal(d, orders).unwrap();
    let base = rep.estimator.clone();
    let coords: Vec<Option<usize>> = base.intercept().map(|_| None).into_iter().chain(base.betas().keys().map(|&r| Some(r))).collect();
    for coord in coords {
        for sign in [int(1), int(-1)] {
            // Moving a coefficient by t shifts the vertex errors by -t * column.
            let mut unit = REstimator::new(d, base.intercept().map(|_| int(0)), base.betas().keys().map(|&r| (r, int(0))).collect()).unwrap();
            let mut betas = unit.betas().clone();
            let intercept = match coord {
                None => Some(sign.clone()),
                Some(r) => {
                    betas.insert(r, sign.clone());
                    unit.intercept().cloned()
                }
            };
            unit = REstimator::new(d, intercept, betas).unwrap();
            let shift: Vec<Exact> = error_profile(&unit).iter().enumerate().map(|(k, e)| e - int(i64::from(k > 0))).collect();
            let derivative = rep
                .profile
                .iter()
                .zip(&shift)
                .filter(|(e, _)| e.abs() == rep.err)
                .map(|(e, s)| if e.is_negative() { -s } else { s.clone() })
                .max()
                .unwrap();
            assert!(!derivative.is_negative(), "d = {d}, R = {orders}, coordinate {coord:?}, sign {sign}");
        }
    }
}

#[test]
fn no_axis_direction_improves_the_optimum() {
    for d in 2..=5 {
        for orders in Orders::all_nonempty(d) {
            active_derivative_nonnegative(d, &orders);
        }
    }
}

#[test]
fn larger_order_sets_never_do_worse() {
    for d in 2..=5 {
        let all = Orders::all_nonempty(d);
        let errs: Vec<Exact> = all.iter().map(|o| fit_optimal(d, o).unwrap().err).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                if a.is_subset(b) {
                    assert!(errs[j] <= errs[i], "d = {d}: {a} ⊆ {b}");
                }
            }
        }
    }
}

#[test]
fn vertex_oracle_agrees_with_lp() {
    for d in 2..=6 {
        for orders in Orders::all_nonempty(d) {
            let rep = fit_optimal(d, &orders).unwrap();
            assert_eq!(vertex_error(&rep.estimator), rep.err, "d = {d}, R = {orders}");
        }
    }
}

#[test]
fn every_schedule_tuple_has_two_parents() {
    for d in 3..=24 {
        let t = tuple_schedule(d).unwrap();
        let mut previous: Vec<Vec<usize>> = (1..=d).map(|i| vec![i]).collect();
        for layer in &t.layers {
            for (tuple, &(p, q)) in layer.tuples.iter().zip(&layer.parents) {
                let union: BTreeSet<usize> = previous[p].iter().chain(&previous[q]).copied().collect();
                assert_eq!(union.into_iter().collect::<Vec<_>>(), *tuple);
            }
            previous = layer.tuples.clone();
        }
    }
}

#[test]
fn optimal_estimators_with_intercept_have_nonnegative_loading() {
    for d in 2..=6 {
        for orders in Orders::all_nonempty(d).into_iter().filter(Orders::has_intercept) {
            let rep = fit_optimal(d, &orders).unwrap();
            let loading = rep.estimator.vertex_loading();
            assert!(loading.iter().all(|v| !v.is_negative()), "d = {d}, R = {orders}: {loading:?}");
        }
    }
}

#[test]
fn full_order_intercept_is_the_chebyshev_center() {
    use maxapprox::fitting::{chebyshev_center, full_coefficients};
    for d in 2..=10 {
        let est = full_coefficients(d).unwrap();
        let uncentred = REstimator::new(d, Some(int(0)), est.betas().clone()).unwrap();
        let (center, half) = chebyshev_center(&error_profile(&uncentred));
        assert_eq!(Some(&center), est.intercept());
        assert_eq!(half, vertex_error(&est));
    }
}
