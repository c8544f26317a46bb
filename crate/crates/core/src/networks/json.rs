use serde::{Deserialize, Serialize};

use super::{Activation, Layer, NetworkError, ReluNetwork};
use crate::numeric::{format_exact, parse_exact, to_f64, Exact, ExactMatrix};

#[derive(Clone, Copy, Debug, Default)]
pub struct JsonOptions {
    /// Also emit `weights_f64` and `bias_f64` next to the exact strings.
    pub with_f64: bool,
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    weights: Vec<Vec<String>>,
    bias: Vec<String>,
    activation: Activation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    annotations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights_f64: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bias_f64: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    input_dim: usize,
    output_dim: usize,
    layers: Vec<LayerDoc>,
}

pub fn to_json(net: &ReluNetwork, options: JsonOptions) -> String {
    let layers = net
        .layers()
        .iter()
        .map(|layer| {
            let w = layer.weights();
            let weights = w.row_vecs().iter().map(|r| r.iter().map(format_exact).collect()).collect();
            LayerDoc {
                weights,
                bias: layer.bias().iter().map(format_exact).collect(),
                activation: layer.activation(),
                annotations: layer.annotations().map(<[_]>::to_vec),
                weights_f64: options
                    .with_f64
                    .then(|| w.row_vecs().iter().map(|r| r.iter().map(to_f64).collect()).collect()),
                bias_f64: options.with_f64.then(|| layer.bias().iter().map(to_f64).collect()),
            }
        })
        .collect();
    let doc = NetworkDoc { input_dim: net.input_dim(), output_dim: net.output_dim(), layers };
    serde_json::to_string_pretty(&doc).expect("network documents always serialise")
}

fn parse_cell(s: &str, at: impl Fn() -> String) -> Result<Exact, NetworkError> {
    parse_exact(s).map_err(|e| NetworkError::Json(format!("{}: {e}", at())))
}

pub fn from_json(text: &str) -> Result<ReluNetwork, NetworkError> {
    let doc: NetworkDoc = serde_json::from_str(text).map_err(|e| NetworkError::Json(e.to_string()))?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (l, ld) in doc.layers.into_iter().enumerate() {
        let rows = ld
            .weights
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, s)| parse_cell(s, || format!("layers[{l}].weights[{r}][{c}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let bias = ld
            .bias
            .iter()
            .enumerate()
            .map(|(r, s)| parse_cell(s, || format!("layers[{l}].bias[{r}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        let matrix = ExactMatrix::from_rows(rows)
            .map_err(|e| NetworkError::Json(format!("layers[{l}].weights: {e}")))?;
        let locate = |e: NetworkError| NetworkError::Json(format!("layers[{l}]: {e}"));
        let mut layer = if matrix.rows() == 0 {
            Layer::sparse(cols, Vec::new(), bias, ld.activation)
        } else {
            Layer::dense(&matrix, bias, ld.activation)
        }
        .map_err(locate)?;
        if let Some(notes) = ld.annotations {
            layer = layer.with_annotations(notes).map_err(locate)?;
        }
        layers.push(layer);
    }
    let net = ReluNetwork::new(doc.input_dim, layers).map_err(|e| NetworkError::Json(e.to_string()))?;
    if net.output_dim() != doc.output_dim {
        return Err(NetworkError::Json(format!(
            "output_dim is {} but the last layer has {} outputs",
            doc.output_dim,
            net.output_dim()
        )));
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::{d1_estimator_network, pairwise_max_network};

    #[test]
    fn round_trip() {
        for net in [pairwise_max_network(5).unwrap(), d1_estimator_network(4).unwrap()] {
            let text = to_json(&net, JsonOptions::default());
            assert_eq!(from_json(&text).unwrap(), net);
            let text = to_json(&net, JsonOptions { with_f64: true });
            assert!(text.contains("weights_f64"));
            assert_eq!(from_json(&text).unwrap(), net);
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_json("{").is_err());
        let bad = r#"{"input_dim":1,"output_dim":1,"layers":[{"weights":[["x"]],"bias":["0"],"activation":"relu"}]}"#;
        let err = from_json(bad).unwrap_err().to_string();
        assert!(err.contains("layers[0].weights[0][0]"), "{err}");
        let bad = r#"{"input_dim":2,"output_dim":1,"layers":[{"weights":[["1"]],"bias":["0"],"activation":"relu"}]}"#;
        assert!(from_json(bad).is_err());
        let bad = r#"{"input_dim":1,"output_dim":2,"layers":[{"weights":[["1"]],"bias":["0"],"activation":"relu"}]}"#;
        assert!(from_json(bad).is_err());
    }
}
