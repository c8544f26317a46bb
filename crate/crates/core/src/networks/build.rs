use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::schedule::tuple_schedule;
use super::{Activation, Layer, NetworkError, ReluNetwork, SparseRow};
use crate::numeric::{ratio, Exact, ExactMatrix};

/// `f(x) = Σ_k relu(x_k - ξ)`; `f(x) ≤ 0` exactly when `max(x) ≤ ξ`.
pub fn heaviside_gate(d: usize, xi: &Exact) -> Result<ReluNetwork, NetworkError> {
    if d < 1 {
        return Err(NetworkError::TooSmall { d, min: 1 });
    }
    let hidden = Layer::dense(&ExactMatrix::identity(d), vec![-xi.clone(); d], Activation::Relu)?
        .with_annotations((1..=d).map(|i| vec![i]).collect())?;
    let sum = Layer::dense(&ExactMatrix::from_fn(1, d, |_, _| Exact::one()), vec![Exact::zero()], Activation::Identity)?;
    ReluNetwork::new(d, vec![hidden, sum])
}

fn add_scaled(acc: &mut BTreeMap<usize, Exact>, combo: &SparseRow, scale: &Exact) {
    for (c, w) in combo {
        *acc.entry(*c).or_insert_with(Exact::zero) += w * scale;
    }
}

/// One carried value per entry: `parents` index the previous stage's values,
/// `tuple` records the subpool it holds.
struct Stage {
    pairs: Vec<(usize, usize)>,
    tuples: Vec<Vec<usize>>,
}

/// Compiles a tree of pairwise maxes into alternating affine/ReLU layers,
/// finishing with an affine readout over the last stage's values.
fn compile_gadgets(
    input_dim: usize,
    inputs: Vec<SparseRow>,
    stages: Vec<Stage>,
    readout: &[Exact],
    readout_bias: Exact,
) -> Result<ReluNetwork, NetworkError> {
    let one = Exact::one();
    let minus = -Exact::one();
    let half = ratio(1, 2);
    let mut values = inputs;
    let mut width = input_dim;
    let mut layers = Vec::new();
    for stage in stages {
        let mut rows = Vec::with_capacity(4 * stage.pairs.len());
        let mut notes = Vec::with_capacity(4 * stage.pairs.len());
        for ((a, b), tuple) in stage.pairs.iter().zip(stage.tuples) {
            for (sa, sb) in [(&one, &minus), (&minus, &one), (&one, &one), (&minus, &minus)] {
                let mut acc = BTreeMap::new();
                add_scaled(&mut acc, &values[*a], sa);
                add_scaled(&mut acc, &values[*b], sb);
                rows.push(acc.into_iter().filter(|(_, w)| !w.is_zero()).collect());
                notes.push(tuple.clone());
            }
        }
        let n = rows.len();
        layers.push(Layer::sparse(width, rows, vec![Exact::zero(); n], Activation::Relu)?.with_annotations(notes)?);
        values = (0..n / 4)
            .map(|k| (0..4).map(|u| (4 * k + u, if u == 3 { -half.clone() } else { half.clone() })).collect())
            .collect();
        width = n;
    }
    let mut acc = BTreeMap::new();
    for (v, w) in values.iter().zip(readout) {
        add_scaled(&mut acc, v, w);
    }
    let out = Layer::sparse(width, vec![acc.into_iter().collect()], vec![readout_bias], Activation::Identity)?;
    layers.push(out);
    ReluNetwork::new(input_dim, layers)
}

fn singletons(d: usize) -> Vec<SparseRow> {
    (0..d).map(|i| vec![(i, Exact::one())]).collect()
}

/// Exact `max` of `d` inputs in `⌈log₂ d⌉` ReLU stages. Inputs are padded to
/// a power of two by repeating the first coordinate, then halves are paired
/// at the midpoint.
pub fn pairwise_max_network(d: usize) -> Result<ReluNetwork, NetworkError> {
    if d < 2 {
        return Err(NetworkError::TooSmall { d, min: 2 });
    }
    let padded = d.next_power_of_two();
    let inputs: Vec<SparseRow> = (0..padded).map(|i| vec![(if i < d { i } else { 0 }, Exact::one())]).collect();
    let mut tuples: Vec<Vec<usize>> = (0..padded).map(|i| vec![if i < d { i + 1 } else { 1 }]).collect();
    let mut stages = Vec::new();
    let mut len = padded;
    while len > 1 {
        let half = len / 2;
        let pairs: Vec<(usize, usize)> = (0..half).map(|i| (i, i + half)).collect();
        let next: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut t: Vec<usize> = tuples[a].iter().chain(&tuples[b]).copied().collect();
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        stages.push(Stage { pairs, tuples: next.clone() });
        tuples = next;
        len = half;
    }
    compile_gadgets(d, inputs, stages, &[Exact::one()], Exact::zero())
}

/// The optimal `{0, d-1}` estimator `1/(2d) + (1/d) Σ_i s(x; {1..d}∖{i})`,
/// with the order-`(d-1)` maxes built through the reuse schedule.
pub fn d1_estimator_network(d: usize) -> Result<ReluNetwork, NetworkError> {
    let schedule = tuple_schedule(d)?;
    let stages = schedule
        .layers
        .iter()
        .map(|layer| Stage { pairs: layer.parents.clone(), tuples: layer.tuples.clone() })
        .collect();
    let weight = ratio(1, d as i64);
    let readout = vec![weight; d];
    compile_gadgets(d, singletons(d), stages, &readout, ratio(1, 2 * d as i64))
}
