// Explicit ReLU networks: exact max, the {0, d-1} estimator, a threshold
// gate, and JSON export.

use std::error::Error;

use maxapprox::fitting::REstimator;
use maxapprox::networks::{d1_estimator_network, from_json, heaviside_gate, pairwise_max_network, to_json, JsonOptions};
use maxapprox::numeric::{parse_exact, ratio, Exact};

fn xs(s: &str) -> Vec<Exact> {
    s.split(',').map(|v| parse_exact(v).expect("literal")).collect()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let max5 = pairwise_max_network(5)?;
    let x = xs("1/5,9/10,1/2,1/10,3/10");
    println!("max network, d = 5: {} ReLU layers of widths {:?}", max5.relu_stages(), max5.relu_widths());
    println!("  max(x) = {}", max5.forward(&x)?[0]);

    let net = d1_estimator_network(9)?;
    let est = REstimator::intercept_and_top(9)?;
    let x = xs("0.3,0.8,0.1,0.5,0.5,0.9,0.2,0.7,0.4");
    println!("{{0,8}} network, d = 9: carried widths {:?}", net.value_widths());
    println!("  network {} vs estimator {}", net.forward(&x)?[0], est.evaluate(&x)?);

    let gate = heaviside_gate(3, &ratio(1, 2))?;
    for x in ["0.1,0.4,0.5", "0.1,0.6,0.2"] {
        println!("gate(max <= 1/2) at ({x}): {}", gate.forward(&xs(x))?[0]);
    }

    let text = to_json(&pairwise_max_network(2)?, JsonOptions::default());
    assert_eq!(from_json(&text)?, pairwise_max_network(2)?);
    println!("\n{text}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
