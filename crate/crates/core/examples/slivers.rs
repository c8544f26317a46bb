// Share of the cube where the top-r coordinates appear in index order.

use std::error::Error;

use maxapprox::oracles::{sliver_classify, sliver_coverage};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for x in [[0.9, 0.5, 0.1], [0.5, 0.9, 0.1], [0.1, 0.9, 0.5]] {
        println!("{x:?}, r = 2 -> {:?}", sliver_classify(&x, 2));
    }
    for (d, r) in [(4, 1), (4, 2), (5, 2), (5, 3), (6, 4)] {
        let c = sliver_coverage(d, r, 100_000, 42)?;
        println!("d = {d}, r = {r}: {:.4} (1/r! = {:.4}, σ = {:.4})", c.fraction, c.predicted, c.std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
