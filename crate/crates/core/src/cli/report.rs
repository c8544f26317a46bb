use serde::Serialize;
use serde_json::{json, Value};

use crate::fitting::{fit_optimal, FitError, Orders, REstimator};
use crate::numeric::{format_decimal, format_exact, Exact};

/// Describes one invocation. Contains nothing time- or host-dependent, so
/// equal manifests come with equal outputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seed: Option<u64>, outputs: Vec<String>) -> Self {
        Self { command: command.into(), parameters, seed, version: env!("CARGO_PKG_VERSION").into(), outputs }
    }
}

/// An exact value with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactJson {
    pub exact: String,
    pub decimal: String,
}

pub fn exact_json(x: &Exact) -> ExactJson {
    ExactJson { exact: format_exact(x), decimal: format_decimal(x) }
}

pub(crate) fn estimator_json(est: &REstimator) -> Value {
    let betas: serde_json::Map<String, Value> =
        est.betas().iter().map(|(r, b)| (r.to_string(), json!(exact_json(b)))).collect();
    json!({
        "d": est.d(),
        "R": est.orders().joined(),
        "beta0": est.intercept().map(exact_json),
        "beta": betas,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub(crate) struct TableRow {
    pub d: usize,
    #[serde(rename = "R")]
    pub r: String,
    pub err: ExactJson,
}

pub(crate) fn table_rows(d_max: usize) -> Result<Vec<TableRow>, String> {
    if !(2..=6).contains(&d_max) {
        return Err(format!("--d-max must be between 2 and 6, got {d_max}"));
    }
    let mut rows = Vec::new();
    for d in 2..=d_max {
        for orders in Orders::all_nonempty(d) {
            let rep = fit_optimal(d, &orders).map_err(|e: FitError| e.to_string())?;
            rows.push(TableRow { d, r: orders.joined(), err: exact_json(&rep.err) });
        }
    }
    Ok(rows)
}

/// `d,R,err_exact,err_decimal` with `R` always quoted.
pub(crate) fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("d,R,err_exact,err_decimal\n");
    for row in rows {
        out.push_str(&format!("{},\"{}\",{},{}\n", row.d, row.r, row.err.exact, row.err.decimal));
    }
    out
}
