// Closed-form coefficients for the estimator using every order, and the
// error they achieve.

use std::error::Error;

use maxapprox::fitting::{fit_optimal, full_coefficients, Orders};
use maxapprox::oracles::vertex_error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 2..=9 {
        let est = full_coefficients(d)?;
        let lp = fit_optimal(d, &Orders::full(d))?;
        let betas: Vec<String> = est.betas().values().map(ToString::to_string).collect();
        println!(
            "d = {d}: err = {} (LP {}), beta_0 = {}, beta = [{}]",
            vertex_error(&est),
            lp.err,
            est.intercept().expect("intercept"),
            betas.join(", ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
