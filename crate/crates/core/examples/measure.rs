// How much of the cube sees a sizeable error: the guaranteed volume next to
// a sampled estimate.

use std::error::Error;

use maxapprox::fitting::{fit_optimal, intercept_measure_bound, measure_lower_bound, Orders};
use maxapprox::numeric::{int, to_f64};
use maxapprox::oracles::random_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 2..=5 {
        let orders = Orders::new([0, d - 1]);
        let rep = fit_optimal(d, &orders)?;
        let eps = &rep.err / int(4);
        let bound = measure_lower_bound(d, &orders, &eps)?;
        let inner = intercept_measure_bound(&rep, &eps).expect("eps below beta_0");
        let sampled = random_error(&rep.estimator, 100_000, 1, Some(to_f64(&eps)))?;
        println!(
            "d = {d}, eps = {eps}: bound {:.3e}, intercept bound {:.3e}, sampled {:.4}",
            to_f64(&bound),
            to_f64(&inner),
            sampled.fraction_at_least.unwrap_or(0.0)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
