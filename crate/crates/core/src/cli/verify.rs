use clap::ValueEnum;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fitting::{fit_optimal, fit_optimal_centered, full_coefficients, measure_lower_bound, Orders, REstimator};
use crate::l2::{l2_optimal, monte_carlo_mse};
use crate::networks::{
    d1_estimator_network, full_estimator_widths, heaviside_gate, pairwise_max_network, tuple_schedule, width_schedule,
};
use crate::numeric::{format_exact, int, parse_exact, ratio, to_f64, Exact};
use crate::oracles::{
    grid_error, lipschitz_gap, max2_closed, max3_closed, random_error, random_rationals, sliver_coverage, vertex_error,
};

/// Errors for `d = 2, 3, 4` as printed in the reference table.
pub(crate) const REFERENCE_TABLE: &[(usize, &str, &str)] = &[
    (2, "1", "1/3"),
    (2, "0,1", "1/4"),
    (3, "1", "1/2"),
    (3, "2", "1/5"),
    (3, "0,1", "1/3"),
    (3, "0,2", "1/6"),
    (3, "1,2", "1/7"),
    (3, "0,1,2", "1/8"),
    (4, "1", "3/5"),
    (4, "2", "1/3"),
    (4, "3", "1/7"),
    (4, "0,1", "3/8"),
    (4, "0,2", "1/4"),
    (4, "0,3", "1/8"),
    (4, "1,2", "1/5"),
    (4, "1,3", "1/9"),
    (4, "2,3", "1/13"),
    (4, "0,1,2", "1/6"),
    (4, "0,1,3", "1/10"),
    (4, "0,2,3", "1/14"),
    (4, "1,2,3", "1/15"),
    (4, "0,1,2,3", "1/16"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Table,
    ClosedForm,
    Full,
    Networks,
    L2,
    Oracles,
    Measure,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }
}

struct Recorder(Vec<Check>);

impl Recorder {
    fn check(&mut self, name: impl Into<String>, expected: impl ToString, got: impl ToString, ok: bool) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(Check { name: name.into(), expected: expected.to_string(), got: got.to_string(), status });
    }

    fn equal(&mut self, name: impl Into<String>, expected: &Exact, got: Result<Exact, String>) {
        match got {
            Ok(v) => self.check(name, format_exact(expected), format_exact(&v), v == *expected),
            Err(e) => self.check(name, format_exact(expected), format!("error: {e}"), false),
        }
    }
}

fn orders(s: &str) -> Orders {
    s.parse().expect("static order set")
}

fn err_of(d: usize, r: &Orders) -> Result<Exact, String> {
    fit_optimal(d, r).map(|rep| rep.err).map_err(|e| e.to_string())
}

fn table(rec: &mut Recorder) {
    for &(d, r, e) in REFERENCE_TABLE {
        let r = orders(r);
        rec.equal(format!("table d={d} R={r}"), &parse_exact(e).expect("static"), err_of(d, &r));
    }
    for d in 2..=4 {
        rec.equal(format!("table d={d} R={{0}}"), &ratio(1, 2), err_of(d, &Orders::new([0])));
    }
}

fn closed_form(rec: &mut Recorder, d_max: usize) {
    for d in 2..=d_max {
        let di = d as i64;
        rec.equal(format!("err d={d} R={{{}}}", d - 1), &ratio(1, 2 * di - 1), err_of(d, &Orders::new([d - 1])));
        rec.equal(format!("err d={d} R={{0,{}}}", d - 1), &ratio(1, 2 * di), err_of(d, &Orders::new([0, d - 1])));
    }
}

fn full(rec: &mut Recorder, d_max: usize) {
    for d in 2..=d_max {
        let target = Exact::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), d));
        let closed = full_coefficients(d).map(|e| vertex_error(&e)).map_err(|e| e.to_string());
        rec.equal(format!("full coefficients d={d}"), &target, closed);
        rec.equal(format!("full LP d={d}"), &target, err_of(d, &Orders::full(d)));
        let centred = fit_optimal_centered(d, &Orders::full(d)).map(|(_, v)| v).map_err(|e| e.to_string());
        rec.equal(format!("full centred route d={d}"), &target, centred);
    }
    let w9: Vec<String> = full_estimator_widths(9).map(|w| w.iter().map(u128::to_string).collect()).unwrap_or_default();
    rec.check("full widths d=9", "36,84,126,126,84,36", w9.join(","), w9.join(",") == "36,84,126,126,84,36");
}

fn networks(rec: &mut Recorder, d_max: usize, samples: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 2..=d_max {
        let net = match pairwise_max_network(d) {
            Ok(n) => n,
            Err(e) => {
                rec.check(format!("pairwise d={d}"), "network", e, false);
                continue;
            }
        };
        let mut bad = 0;
        for _ in 0..samples {
            let x = random_rationals(&mut rng, d);
            let want = x.iter().max().cloned().expect("d ≥ 2");
            if net.forward(&x).ok().and_then(|y| y.into_iter().next()) != Some(want) {
                bad += 1;
            }
        }
        rec.check(format!("pairwise max d={d}"), "0 mismatches", format!("{bad} mismatches"), bad == 0);
        let stages = usize::BITS - (d - 1).leading_zeros();
        rec.check(format!("pairwise stages d={d}"), stages, net.relu_stages(), net.relu_stages() == stages as usize);
    }
    for d in 3..=d_max.min(12) {
        let (Ok(net), Ok(est)) = (d1_estimator_network(d), REstimator::intercept_and_top(d)) else {
            rec.check(format!("d1 network d={d}"), "network", "build error", false);
            continue;
        };
        let mut bad = 0;
        for _ in 0..samples {
            let x = random_rationals(&mut rng, d);
            let want = est.evaluate(&x).ok();
            if net.forward(&x).ok().and_then(|y| y.into_iter().next()) != want {
                bad += 1;
            }
        }
        rec.check(format!("d1 network d={d}"), "0 mismatches", format!("{bad} mismatches"), bad == 0);
        let widths = width_schedule(d).map(|w| w.widths).unwrap_or_default();
        rec.check(format!("d1 widths d={d}"), format!("{widths:?}"), format!("{:?}", net.value_widths()), net.value_widths() == widths);
    }
    let mut bad = 0;
    for _ in 0..samples.max(1) * 10 {
        let d = rng.random_range(1..=8);
        let x = random_rationals(&mut rng, d);
        let xi = if rng.random_ratio(1, 4) { x[rng.random_range(0..d)].clone() } else { random_rationals(&mut rng, 1).remove(0) };
        let Ok(gate) = heaviside_gate(d, &xi) else {
            bad += 1;
            continue;
        };
        let off = gate.forward(&x).map(|y| !y[0].is_positive()).unwrap_or(false);
        if off != (x.iter().max().expect("d ≥ 1") <= &xi) {
            bad += 1;
        }
    }
    rec.check("heaviside biconditional", "0 mismatches", format!("{bad} mismatches"), bad == 0);
    for d in 3..=40 {
        let ok = match (tuple_schedule(d), width_schedule(d)) {
            (Ok(t), Ok(w)) => t.widths() == w.widths,
            _ => false,
        };
        rec.check(format!("tuple schedule d={d}"), "matches width formula", ok, ok);
    }
    if let Ok(t) = tuple_schedule(10) {
        let got: Vec<(usize, usize)> = t.layers.iter().map(|l| (l.width(), l.repeated())).collect();
        let want = vec![(17, 9), (16, 6), (12, 2), (10, 0)];
        rec.check("schedule d=10 sizes and repeats", format!("{want:?}"), format!("{got:?}"), got == want);
    }
}

fn l2(rec: &mut Recorder, d_max: usize, samples: usize, seed: u64) {
    for d in 2..=d_max {
        match l2_optimal(d) {
            Ok(rep) => {
                let err = rep.normalized_sq_error.clone();
                rec.check(format!("l2 positive d={d}"), "> 0", format_exact(&err), err.is_positive());
                let orth = rep.normal_residual().iter().all(Zero::is_zero);
                rec.check(format!("l2 orthogonal residual d={d}"), true, orth, orth);
                if d <= 3 && samples > 0 {
                    let mc = monte_carlo_mse(&rep, samples, seed.wrapping_add(d as u64));
                    let ok = mc.agrees(to_f64(&err), 3.0);
                    rec.check(
                        format!("l2 monte carlo d={d}"),
                        format!("{} within 3σ", to_f64(&err)),
                        format!("{} ± {}", mc.mean, mc.std_error),
                        ok,
                    );
                }
            }
            Err(e) => rec.check(format!("l2 d={d}"), "report", e, false),
        }
    }
    rec.equal("l2 d=2 error", &ratio(1, 72), l2_optimal(2).map(|r| r.normalized_sq_error).map_err(|e| e.to_string()));
}

fn oracles(rec: &mut Recorder, samples: usize, seed: u64) {
    for (d, n) in [(2usize, 101usize), (3, 51)] {
        let Ok(rep) = fit_optimal(d, &Orders::new([0, d - 1])) else {
            rec.check(format!("oracles d={d}"), "fit", "error", false);
            continue;
        };
        let exact = to_f64(&rep.err);
        let gap = to_f64(&lipschitz_gap(&rep.estimator)) / (n - 1) as f64;
        let tol = 1e-12;
        match grid_error(&rep.estimator, n) {
            Ok(g) => rec.check(
                format!("grid error d={d} n={n}"),
                format!("[{}, {exact}]", exact - gap),
                g,
                g <= exact + tol && g >= exact - gap - tol,
            ),
            Err(e) => rec.check(format!("grid error d={d}"), "value", e, false),
        }
        match random_error(&rep.estimator, samples, seed, None) {
            Ok(r) => rec.check(format!("random error d={d}"), format!("≤ {exact}"), r.max_error, r.max_error <= exact + tol),
            Err(e) => rec.check(format!("random error d={d}"), "value", e, false),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bad2, mut bad3) = (0, 0);
    for _ in 0..samples {
        let v = random_rationals(&mut rng, 3);
        if max2_closed(&v[0], &v[1]) != v[0].clone().max(v[1].clone()) {
            bad2 += 1;
        }
        let want = v.iter().max().cloned().expect("three values");
        if max3_closed(&v[0], &v[1], &v[2]) != want {
            bad3 += 1;
        }
    }
    rec.check("max2 closed form", "0 mismatches", format!("{bad2} mismatches"), bad2 == 0);
    rec.check("max3 closed form", "0 mismatches", format!("{bad3} mismatches"), bad3 == 0);
    let tie = parse_exact("7/3").expect("static");
    rec.equal("max3 all equal", &tie, Ok(max3_closed(&tie, &tie, &tie)));
    for (d, r) in [(4usize, 1usize), (4, 2), (5, 3)] {
        match sliver_coverage(d, r, samples, seed) {
            Ok(c) => rec.check(
                format!("sliver coverage d={d} r={r}"),
                format!("{} within 3σ", c.predicted),
                c.fraction,
                (c.fraction - c.predicted).abs() <= 3.0 * c.std_error + 1e-12,
            ),
            Err(e) => rec.check(format!("sliver coverage d={d} r={r}"), "value", e, false),
        }
    }
}

fn measure(rec: &mut Recorder, samples: usize, seed: u64) {
    for (d, r) in [(2usize, "0,1"), (3, "0,2"), (4, "0,3")] {
        let r = orders(r);
        let Ok(rep) = fit_optimal(d, &r) else {
            rec.check(format!("measure d={d}"), "fit", "error", false);
            continue;
        };
        let eps = &rep.err / int(4);
        let (Ok(bound), Ok(sampled)) = (measure_lower_bound(d, &r, &eps), random_error(&rep.estimator, samples, seed, Some(to_f64(&eps)))) else {
            rec.check(format!("measure d={d}"), "bound", "error", false);
            continue;
        };
        let p = sampled.fraction_at_least.unwrap_or(0.0);
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        rec.check(
            format!("measure d={d} R={r} eps=err/4"),
            format!("≥ {} - 3σ", to_f64(&bound)),
            format!("{p} (σ = {sigma})"),
            p >= to_f64(&bound) - 3.0 * sigma,
        );
    }
}

fn default_d_max(suite: Suite) -> usize {
    match suite {
        Suite::Table => 4,
        Suite::ClosedForm => 16,
        Suite::Full => 12,
        Suite::Networks => 64,
        Suite::L2 => 8,
        _ => 0,
    }
}

fn default_samples(suite: Suite) -> usize {
    match suite {
        Suite::Networks => 1000,
        Suite::L2 => 1_000_000,
        _ => 100_000,
    }
}

/// Runs one suite, or every suite for [`Suite::All`] (each with its own
/// defaults unless overridden).
pub fn run_suite(suite: Suite, d_max: Option<usize>, samples: Option<usize>, seed: u64) -> SuiteReport {
    let mut rec = Recorder(Vec::new());
    let parts = if suite == Suite::All {
        vec![Suite::Table, Suite::ClosedForm, Suite::Full, Suite::Networks, Suite::L2, Suite::Oracles, Suite::Measure]
    } else {
        vec![suite]
    };
    for part in parts {
        let dm = d_max.unwrap_or_else(|| default_d_max(part));
        let n = samples.unwrap_or_else(|| default_samples(part));
        match part {
            Suite::Table => table(&mut rec),
            Suite::ClosedForm => closed_form(&mut rec, dm),
            Suite::Full => full(&mut rec, dm),
            Suite::Networks => networks(&mut rec, dm, n, seed),
            Suite::L2 => l2(&mut rec, dm, n, seed),
            Suite::Oracles => oracles(&mut rec, n, seed),
            Suite::Measure => measure(&mut rec, n, seed),
            Suite::All => unreachable!("expanded above"),
        }
    }
    SuiteReport { suite, checks: rec.0 }
}

