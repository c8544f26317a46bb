//! `maxapprox` command line. Exit codes: 0 success, 1 a verification check
//! failed, 2 bad usage or invalid input.

mod report;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::fitting::{
    closed_form_error, fit_optimal, fit_optimal_centered, full_coefficients, intercept_measure_bound,
    measure_lower_bound, ClosedForm, Orders,
};
use crate::l2::{l2_optimal, monte_carlo_mse};
use crate::networks::{
    d1_estimator_network, from_json, heaviside_gate, pairwise_max_network, to_json, tuple_schedule, width_schedule,
    JsonOptions, ReluNetwork,
};
use crate::numeric::{format_exact, parse_exact, to_f64, Exact};
use crate::oracles::{random_error, vertex_error};

pub use report::{exact_json, ExactJson, RunManifest};
pub use verify::{run_suite, Check, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "maxapprox", version, about = "Exact subpool-max approximations of the max function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal error for every nonempty order set, d = 2..=d-max.
    Table {
        #[arg(long, default_value_t = 4)]
        d_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Optimal estimator for one order set.
    Fit {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: Orders,
        #[command(flatten)]
        out: OutArg,
    },
    /// Closed-form full-order coefficients.
    CoeffsFull {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Layer widths and split tables of the {0, d-1} network.
    Widths {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Least-squares full-order fit.
    L2 {
        #[arg(long)]
        d: usize,
        /// Monte Carlo samples for a sampled cross-check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Volume where the optimal estimator errs by at least eps.
    Measure {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: Orders,
        #[arg(long, value_parser = parse_exact_arg)]
        eps: Exact,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build, evaluate or re-export ReLU networks.
    #[command(subcommand)]
    Net(NetCommand),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum NetCommand {
    Build {
        #[command(flatten)]
        spec: NetSpec,
        /// Also write float copies of the weights.
        #[arg(long = "f64")]
        with_f64: bool,
        #[command(flatten)]
        out: OutArg,
    },
    Eval {
        /// Network JSON file; otherwise the network is built from --kind/--d.
        #[arg(long)]
        net: Option<PathBuf>,
        #[command(flatten)]
        spec: NetSpec,
        /// Comma-separated input, e.g. "1,0,1/3".
        #[arg(long)]
        x: String,
    },
    Export {
        #[arg(long)]
        net: PathBuf,
        #[arg(long = "f64")]
        with_f64: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
pub struct NetSpec {
    #[arg(long, value_enum)]
    kind: Option<NetKind>,
    #[arg(long)]
    d: Option<usize>,
    /// Threshold of the heaviside gate.
    #[arg(long, value_parser = parse_exact_arg, default_value = "1/2")]
    xi: Exact,
}

#[derive(Args, Debug)]
pub struct OutArg {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NetKind {
    Pairwise,
    D1,
    Heaviside,
}

fn parse_exact_arg(s: &str) -> Result<Exact, String> {
    parse_exact(s).map_err(|e| e.to_string())
}

/// Input errors reported with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn emit(text: &str, out: &OutArg, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn outputs(out: &OutArg) -> Vec<String> {
    vec![out.out.as_deref().map_or_else(|| "stdout".to_string(), |p| p.display().to_string())]
}

fn emit_json(command: &str, parameters: Value, seed: Option<u64>, result: Value, out: &OutArg, stdout: &mut dyn Write) -> Result<(), Failure> {
    let manifest = RunManifest::new(command, parameters, seed, outputs(out));
    let mut text = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))?;
    text.push('\n');
    emit(&text, out, stdout)
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match command {
        Command::Table { d_max, format, out } => {
            let rows = report::table_rows(d_max)?;
            let text = match format {
                Format::Csv => report::table_csv(&rows),
                Format::Json => {
                    let manifest = RunManifest::new("table", json!({ "d_max": d_max, "format": "json" }), None, outputs(&out));
                    let mut t = serde_json::to_string_pretty(&json!({ "manifest": manifest, "rows": rows }))?;
                    t.push('\n');
                    t
                }
            };
            emit(&text, &out, stdout)?;
        }
        Command::Fit { d, r, out } => {
            let rep = fit_optimal(d, &r)?;
            let closed = match closed_form_error(d, &r) {
                ClosedForm::Exact(v) => json!({ "kind": "exact", "value": exact_json(&v) }),
                ClosedForm::UpperBound(v) => json!({ "kind": "upper_bound", "value": exact_json(&v) }),
                ClosedForm::NotCovered => Value::Null,
            };
            let mut result = json!({
                "d": d,
                "R": r.joined(),
                "err": exact_json(&rep.err),
                "estimator": report::estimator_json(&rep.estimator),
                "profile": rep.profile.iter().map(exact_json).collect::<Vec<_>>(),
                "certificate_weights": rep.certificate.weights.iter().map(exact_json).collect::<Vec<_>>(),
                "closed_form": closed,
            });
            if r.has_intercept() {
                let (_, value) = fit_optimal_centered(d, &r)?;
                result["centered_route_err"] = json!(exact_json(&value));
            }
            emit_json("fit", json!({ "d": d, "R": r.joined() }), None, result, &out, stdout)?;
        }
        Command::CoeffsFull { d, out } => {
            let est = full_coefficients(d)?;
            let result = json!({
                "d": d,
                "achieved_err": exact_json(&vertex_error(&est)),
                "estimator": report::estimator_json(&est),
            });
            emit_json("coeffs-full", json!({ "d": d }), None, result, &out, stdout)?;
        }
        Command::Widths { d, out } => {
            let widths = width_schedule(d)?;
            let schedule = tuple_schedule(d)?;
            let mut tables = serde_json::Map::new();
            for j in 1..=schedule.depth {
                let table = schedule.split_table(j);
                let _ = writeln!(stderr, "layer {j}:\n{table}");
                tables.insert(j.to_string(), json!(table.lines().collect::<Vec<_>>()));
            }
            let layers: Vec<Value> = schedule
                .layers
                .iter()
                .enumerate()
                .map(|(i, l)| json!({ "layer": i + 1, "width": l.width(), "repeated": l.repeated(), "unique": l.unique() }))
                .collect();
            let full = crate::networks::full_estimator_widths(d)?;
            let result = json!({
                "d": d,
                "depth": widths.depth,
                "widths": widths.widths,
                "hidden_widths": widths.hidden_widths(),
                "layers": layers,
                "full_estimator_widths": full.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "split_tables": tables,
            });
            emit_json("widths", json!({ "d": d }), None, result, &out, stdout)?;
        }
        Command::L2 { d, samples, seed, out } => {
            let rep = l2_optimal(d)?;
            let mut result = json!({
                "d": d,
                "alpha_star": rep.alpha_star.iter().map(exact_json).collect::<Vec<_>>(),
                "alpha0_star": exact_json(&rep.alpha0_star),
                "normalized_sq_error": exact_json(&rep.normalized_sq_error),
            });
            if samples > 0 {
                let mc = monte_carlo_mse(&rep, samples, seed);
                result["monte_carlo"] = json!({
                    "samples": mc.samples,
                    "mean": mc.mean,
                    "std_error": mc.std_error,
                    "within_3_sigma": mc.agrees(to_f64(&rep.normalized_sq_error), 3.0),
                });
            }
            emit_json("l2", json!({ "d": d, "samples": samples }), Some(seed), result, &out, stdout)?;
        }
        Command::Measure { d, r, eps, samples, seed, out } => {
            let rep = fit_optimal(d, &r)?;
            let bound = measure_lower_bound(d, &r, &eps)?;
            let inner = intercept_measure_bound(&rep, &eps);
            let sampled = random_error(&rep.estimator, samples, seed, Some(to_f64(&eps)))?;
            let fraction = sampled.fraction_at_least.unwrap_or(0.0);
            let sigma = (fraction * (1.0 - fraction) / samples as f64).sqrt();
            let result = json!({
                "d": d,
                "R": r.joined(),
                "err": exact_json(&rep.err),
                "eps": exact_json(&eps),
                "lower_bound": exact_json(&bound),
                "intercept_bound": inner.as_ref().map(exact_json),
                "empirical_fraction": fraction,
                "std_error": sigma,
                "max_sampled_error": sampled.max_error,
                "consistent": fraction + 3.0 * sigma >= to_f64(&bound),
            });
            let params = json!({ "d": d, "R": r.joined(), "eps": format_exact(&eps), "samples": samples });
            emit_json("measure", params, Some(seed), result, &out, stdout)?;
        }
        Command::Net(net) => return run_net(net, stdout),
        Command::Verify { suite, d_max, samples, seed, out } => {
            let rep = run_suite(suite, d_max, samples, seed);
            let failed = rep.failed();
            let params = json!({ "suite": suite, "d_max": d_max, "samples": samples });
            let result = serde_json::to_value(&rep)?;
            emit_json("verify", params, Some(seed), result, &out, stdout)?;
            let _ = writeln!(stderr, "{} checks, {failed} failed", rep.checks.len());
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY });
        }
    }
    Ok(EXIT_OK)
}

fn build_net(spec: &NetSpec) -> Result<ReluNetwork, Failure> {
    let (Some(kind), Some(d)) = (spec.kind, spec.d) else {
        return Err(Failure("--kind and --d are required to build a network".into()));
    };
    Ok(match kind {
        NetKind::Pairwise => pairwise_max_network(d)?,
        NetKind::D1 => d1_estimator_network(d)?,
        NetKind::Heaviside => heaviside_gate(d, &spec.xi)?,
    })
}

fn read_net(path: &Path) -> Result<ReluNetwork, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn run_net(cmd: NetCommand, stdout: &mut dyn Write) -> Outcome {
    match cmd {
        NetCommand::Build { spec, with_f64, out } => {
            let net = build_net(&spec)?;
            let mut text = to_json(&net, JsonOptions { with_f64 });
            text.push('\n');
            emit(&text, &out, stdout)?;
        }
        NetCommand::Eval { net, spec, x } => {
            let net = match net {
                Some(path) => read_net(&path)?,
                None => build_net(&spec)?,
            };
            let input = x.split(',').map(|v| parse_exact(v.trim())).collect::<Result<Vec<_>, _>>()?;
            let y = net.forward(&input)?;
            let line: Vec<String> = y.iter().map(format_exact).collect();
            writeln!(stdout, "{}", line.join(","))?;
        }
        NetCommand::Export { net, with_f64, out } => {
            let net = read_net(&net)?;
            let mut text = to_json(&net, JsonOptions { with_f64 });
            text.push('\n');
            emit(&text, &out, stdout)?;
        }
    }
    Ok(EXIT_OK)
}
