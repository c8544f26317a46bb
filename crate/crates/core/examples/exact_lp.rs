// The exact simplex solver on its own, with dual values and a certificate
// check.

use std::error::Error;

use maxapprox::numeric::{int, Bound, ExactMatrix, LinearProgram, Sense};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // maximise 3x + 5y  s.t.  x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18
    let lp = LinearProgram {
        objective: vec![int(-3), int(-5)],
        constraints: ExactMatrix::from_rows(vec![
            vec![int(1), int(0)],
            vec![int(0), int(2)],
            vec![int(3), int(2)],
        ])?,
        rhs: vec![int(4), int(12), int(18)],
        senses: vec![Sense::Le; 3],
        bounds: vec![Bound::NonNegative; 2],
    };
    let sol = lp.solve()?;
    lp.certify(&sol)?;
    let x: Vec<String> = sol.x.iter().map(ToString::to_string).collect();
    let y: Vec<String> = sol.duals.iter().map(ToString::to_string).collect();
    println!("optimum {} at x = ({}), duals ({}), {} pivots", -sol.value, x.join(", "), y.join(", "), sol.pivots);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
