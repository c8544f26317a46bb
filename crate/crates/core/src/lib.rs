//! Exact analysis of how well averaged subpool maxes, and ReLU networks
//! built from them, approximate `max(x_1, …, x_d)` on the unit cube.
//!
//! - [`subpool`]: subset ranking, `S(x; r, d)` and the `B`, `V`, `K` matrices.
//! - [`fitting`]: optimal minimax estimators over exact LPs.
//! - [`networks`]: explicit ReLU networks and their width schedules.
//! - [`l2`]: the least-squares counterpart.
//! - [`oracles`]: grid, sampling and closed-form checks.
//! - [`cli`]: the `maxapprox` command line.

pub mod cli;
pub mod fitting;
pub mod l2;
pub mod networks;
pub mod numeric;
pub mod oracles;
pub mod subpool;
