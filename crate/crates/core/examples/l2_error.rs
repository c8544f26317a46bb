// Least-squares fit of the max with every subpool order, checked against
// sampling.

use std::error::Error;

use maxapprox::l2::{l2_optimal, monte_carlo_mse};
use maxapprox::numeric::{to_f64, Both};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 2..=6 {
        let rep = l2_optimal(d)?;
        let alpha: Vec<String> = rep.alpha_star.iter().map(ToString::to_string).collect();
        println!("d = {d}: mse = {}, alpha_0 = {}, alpha = [{}]", Both(&rep.normalized_sq_error), rep.alpha0_star, alpha.join(", "));
        if d <= 3 {
            let mc = monte_carlo_mse(&rep, 200_000, d as u64);
            let z = (mc.mean - to_f64(&rep.normalized_sq_error)) / mc.std_error;
            println!("  sampled {:.6} ± {:.6} (z = {z:.2})", mc.mean, mc.std_error);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
