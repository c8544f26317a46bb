//! Explicit ReLU networks that compute maxes and subpool-max estimators.
//!
//! Weights are exact rationals and stored sparsely; the dense form is only
//! materialised for export. Layer widths are reported two ways: `relu_width`
//! counts ReLU units, while `value_width` counts carried subpool maxes, each
//! of which costs four units in the sign-split gadget
//! `max(a, b) = (relu(a-b) + relu(b-a) + relu(a+b) - relu(-a-b)) / 2`.

mod build;
mod json;
mod schedule;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use build::{d1_estimator_network, heaviside_gate, pairwise_max_network};
pub use json::{from_json, to_json, JsonOptions};
pub use schedule::{
    depth, full_estimator_widths, tuple_schedule, width_schedule, zeta, ScheduleLayer, TupleSchedule, WidthSchedule,
};

use crate::numeric::{Exact, ExactMatrix};
use crate::subpool::PoolScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("dimension must be at least {min}, got {d}")]
    TooSmall { d: usize, min: usize },
    #[error("schedule layer {layer}: {reason}")]
    Schedule { layer: usize, reason: String },
    #[error("malformed network JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

/// Sparse row: `(input index, weight)` pairs with nonzero weights.
pub type SparseRow = Vec<(usize, Exact)>;

/// An affine map followed by an activation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    inputs: usize,
    rows: Vec<SparseRow>,
    bias: Vec<Exact>,
    activation: Activation,
    annotations: Option<Vec<Vec<usize>>>,
    scaled: Scaled,
}

/// The layer times the common denominator of its weights and biases.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Scaled {
    denom: BigInt,
    rows: Vec<Vec<(usize, BigInt)>>,
    bias: Vec<BigInt>,
}

impl Scaled {
    fn new(rows: &[SparseRow], bias: &[Exact]) -> Self {
        let denom = rows
            .iter()
            .flatten()
            .map(|(_, w)| w)
            .chain(bias)
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let lift = |v: &Exact| v.numer() * (&denom / v.denom());
        Self {
            rows: rows.iter().map(|r| r.iter().map(|(c, w)| (*c, lift(w))).collect()).collect(),
            bias: bias.iter().map(lift).collect(),
            denom,
        }
    }
}

impl Layer {
    pub fn dense(weights: &ExactMatrix, bias: Vec<Exact>, activation: Activation) -> Result<Self, NetworkError> {
        let rows = (0..weights.rows())
            .map(|r| weights.row(r).iter().cloned().enumerate().filter(|(_, w)| !w.is_zero()).collect())
            .collect();
        Self::sparse(weights.cols(), rows, bias, activation)
    }

    pub fn sparse(inputs: usize, rows: Vec<SparseRow>, bias: Vec<Exact>, activation: Activation) -> Result<Self, NetworkError> {
        if rows.len() != bias.len() {
            return Err(NetworkError::Dimension(format!("{} weight rows but {} biases", rows.len(), bias.len())));
        }
        if let Some(&(c, _)) = rows.iter().flatten().find(|(c, _)| *c >= inputs) {
            return Err(NetworkError::Dimension(format!("weight column {c} outside {inputs} inputs")));
        }
        let rows: Vec<SparseRow> =
            rows.into_iter().map(|r| r.into_iter().filter(|(_, w)| !w.is_zero()).collect()).collect();
        let scaled = Scaled::new(&rows, &bias);
        Ok(Self { inputs, rows, bias, activation, annotations: None, scaled })
    }

    /// Attaches one index tuple per output neuron.
    pub fn with_annotations(mut self, annotations: Vec<Vec<usize>>) -> Result<Self, NetworkError> {
        if annotations.len() != self.outputs() {
            return Err(NetworkError::Dimension(format!(
                "{} annotations for {} neurons",
                annotations.len(),
                self.outputs()
            )));
        }
        self.annotations = Some(annotations);
        Ok(self)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.bias.len()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn bias(&self) -> &[Exact] {
        &self.bias
    }

    pub fn sparse_rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn annotations(&self) -> Option<&[Vec<usize>]> {
        self.annotations.as_deref()
    }

    pub fn weights(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.outputs(), self.inputs);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, w) in row {
                m[(r, *c)] = w.clone();
            }
        }
        m
    }

    fn apply<T: PoolScalar>(&self, x: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| {
                let mut acc = T::from_exact(b);
                for (c, w) in row {
                    acc = acc + T::from_exact(w) * x[*c].clone();
                }
                match self.activation {
                    Activation::Relu if acc < T::zero() => T::zero(),
                    _ => acc,
                }
            })
            .collect()
    }
}

/// Alternating affine and activation layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReluNetwork {
    input_dim: usize,
    layers: Vec<Layer>,
}

impl ReluNetwork {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self, NetworkError> {
        let mut width = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.inputs != width {
                return Err(NetworkError::Dimension(format!(
                    "layer {} expects {} inputs but receives {width}",
                    i + 1,
                    layer.inputs
                )));
            }
            width = layer.outputs();
        }
        Ok(Self { input_dim, layers })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, Layer::outputs)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of layers followed by a ReLU.
    pub fn relu_stages(&self) -> usize {
        self.layers.iter().filter(|l| l.activation == Activation::Relu).count()
    }

    pub fn relu_widths(&self) -> Vec<usize> {
        self.layers.iter().filter(|l| l.activation == Activation::Relu).map(Layer::outputs).collect()
    }

    /// Carried maxes per ReLU stage, for networks built from the four-unit
    /// pairwise-max gadget.
    pub fn value_widths(&self) -> Vec<usize> {
        self.relu_widths().into_iter().map(|w| w / 4).collect()
    }

    /// Exact evaluation; see [`forward`].
    pub fn forward(&self, x: &[Exact]) -> Result<Vec<Exact>, NetworkError> {
        forward(self, x)
    }

    /// Layer-by-layer evaluation in any pool scalar, e.g. `f64`.
    pub fn evaluate<T: PoolScalar>(&self, x: &[T]) -> Result<Vec<T>, NetworkError> {
        if x.len() != self.input_dim {
            return Err(NetworkError::Dimension(format!(
                "input has length {}, network expects {}",
                x.len(),
                self.input_dim
            )));
        }
        let mut v = x.to_vec();
        for layer in &self.layers {
            v = layer.apply(&v);
        }
        Ok(v)
    }
}

/// Exact forward evaluation. Values are carried as integers over one
/// positive common scale, which ReLU commutes with.
pub fn forward(net: &ReluNetwork, x: &[Exact]) -> Result<Vec<Exact>, NetworkError> {
    if x.len() != net.input_dim {
        return Err(NetworkError::Dimension(format!(
            "input has length {}, network expects {}",
            x.len(),
            net.input_dim
        )));
    }
    let mut scale = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut v: Vec<BigInt> = x.iter().map(|q| q.numer() * (&scale / q.denom())).collect();
    for layer in &net.layers {
        let sc = &layer.scaled;
        v = sc
            .rows
            .iter()
            .zip(&sc.bias)
            .map(|(row, b)| {
                let mut acc = b * &scale;
                for (c, w) in row {
                    acc += w * &v[*c];
                }
                if layer.activation == Activation::Relu && acc.is_negative() {
                    acc.set_zero();
                }
                acc
            })
            .collect();
        scale *= &sc.denom;
    }
    Ok(v.into_iter().map(|n| Exact::new(n, scale.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    #[test]
    fn identity_layer() {
        let layer = Layer::dense(&ExactMatrix::identity(3), vec![int(0); 3], Activation::Identity).unwrap();
        let net = ReluNetwork::new(3, vec![layer]).unwrap();
        let x = vec![ratio(-1, 2), int(4), ratio(7, 3)];
        assert_eq!(forward(&net, &x).unwrap(), x);
        assert!(forward(&net, &x[..2]).is_err());
    }

    #[test]
    fn relu_clamps() {
        let layer = Layer::dense(&ExactMatrix::identity(2), vec![int(1), int(-1)], Activation::Relu).unwrap();
        let net = ReluNetwork::new(2, vec![layer]).unwrap();
        assert_eq!(forward(&net, &[int(-3), int(3)]).unwrap(), vec![int(0), int(2)]);
        assert_eq!(net.evaluate(&[-3.0, 3.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn integer_path_matches_layerwise() {
        let layer = Layer::dense(
            &ExactMatrix::from_rows(vec![vec![ratio(1, 3), ratio(-2, 5)], vec![ratio(3, 4), int(1)]]).unwrap(),
            vec![ratio(1, 7), ratio(-5, 6)],
            Activation::Relu,
        )
        .unwrap();
        let out = Layer::dense(&ExactMatrix::from_rows(vec![vec![ratio(1, 2), ratio(-3, 2)]]).unwrap(), vec![ratio(1, 9)], Activation::Identity)
            .unwrap();
        let net = ReluNetwork::new(2, vec![layer, out]).unwrap();
        for x in [[ratio(1, 2), ratio(-1, 3)], [int(4), int(2)], [ratio(-7, 11), ratio(13, 3)]] {
            assert_eq!(forward(&net, &x).unwrap(), net.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn composition_checked() {
        let a = Layer::dense(&ExactMatrix::zeros(2, 3), vec![int(0); 2], Activation::Relu).unwrap();
        let b = Layer::dense(&ExactMatrix::zeros(1, 3), vec![int(0)], Activation::Identity).unwrap();
        assert!(ReluNetwork::new(3, vec![a, b]).is_err());
        assert!(Layer::dense(&ExactMatrix::zeros(2, 3), vec![int(0)], Activation::Relu).is_err());
    }
}
