// Layer widths of the network that computes all order-(d-1) maxes with
// shared intermediate results, and the split tables behind them.

use std::error::Error;

use maxapprox::networks::{full_estimator_widths, tuple_schedule, width_schedule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in [5, 9, 17] {
        let w = width_schedule(d)?;
        println!("d = {d}: depth {}, widths {:?}", w.depth, w.widths);
    }
    println!("d = 9, full order set: hidden widths {:?}", full_estimator_widths(9)?);

    let schedule = tuple_schedule(10)?;
    for (j, layer) in schedule.layers.iter().enumerate() {
        println!("\nlayer {} ({} tuples, {} shared):", j + 1, layer.width(), layer.repeated());
        println!("{}", schedule.split_table(j + 1));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
