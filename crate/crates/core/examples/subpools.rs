// Subpool indexing and the averaged subpool max as a weighted sum of order
// statistics.

use std::error::Error;

use maxapprox::numeric::{parse_exact, Exact};
use maxapprox::subpool::{
    avg_subpool_max_direct, avg_subpool_max_orderstat, combination_rank, combination_unrank, k_matrix, SubsetIndex,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (d, r) = (5, 3);
    for j in [1, 2, 10] {
        let subset = combination_unrank(SubsetIndex::new(j, r, d)?);
        println!("C({j}, {r}, {d}) = {subset:?}, rank back = {}", combination_rank(&subset, d)?.rank());
    }

    let x: Vec<Exact> = ["0.2", "0.9", "1/3", "0.1", "0.7"].iter().map(|s| parse_exact(s)).collect::<Result<_, _>>()?;
    for r in 1..=d {
        let direct = avg_subpool_max_direct(&x, r)?;
        let sorted = avg_subpool_max_orderstat(&x, r)?;
        println!("S(x; {r}, {d}) = {direct} = {sorted}");
    }
    println!("\nK(4) =\n{}", k_matrix(4)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
