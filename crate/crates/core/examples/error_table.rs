// Optimal error of every order set for small pools.

use std::error::Error;

use maxapprox::fitting::{fit_optimal, Orders};
use maxapprox::numeric::Both;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 2..=4 {
        for orders in Orders::all_nonempty(d) {
            let rep = fit_optimal(d, &orders)?;
            println!("d = {d}  R = {orders:<14} err = {}", Both(&rep.err));
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
