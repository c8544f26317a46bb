// Fit one estimator and inspect its coefficients, vertex profile and the
// dual certificate that proves optimality.

use std::error::Error;

use maxapprox::fitting::{fit_optimal, fit_optimal_centered, Orders};
use maxapprox::numeric::{dot, Both};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = 9;
    let orders: Orders = "0,8".parse()?;
    let rep = fit_optimal(d, &orders)?;
    println!("d = {d}, R = {orders}: err = {}", Both(&rep.err));
    if let Some(b0) = rep.estimator.intercept() {
        println!("  beta_0 = {b0}");
    }
    for (r, b) in rep.estimator.betas() {
        println!("  beta_{r} = {b}");
    }
    let profile: Vec<String> = rep.profile.iter().map(ToString::to_string).collect();
    println!("  vertex errors: {}", profile.join(", "));

    // The certificate weights put mass only where the error peaks.
    let w = &rep.certificate.weights;
    println!("  certificate: {}", w.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    println!("  w . profile = {}", dot(w, &rep.profile));

    let (centred, value) = fit_optimal_centered(d, &orders)?;
    println!("  centred route: err = {value}, beta_0 = {}", centred.intercept().expect("has intercept"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
