// The two one-parameter families with known optimal error.

use std::error::Error;

use maxapprox::fitting::{closed_form_error, fit_optimal, ClosedForm, Orders};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>3} {:>12} {:>12}", "d", "{d-1}", "{0,d-1}");
    for d in 2..=16 {
        let mut cells = Vec::new();
        for orders in [Orders::new([d - 1]), Orders::new([0, d - 1])] {
            let err = fit_optimal(d, &orders)?.err;
            let mark = match closed_form_error(d, &orders) {
                ClosedForm::Exact(v) if v == err => "",
                _ => " (!)",
            };
            cells.push(format!("{err}{mark}"));
        }
        println!("{d:>3} {:>12} {:>12}", cells[0], cells[1]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
