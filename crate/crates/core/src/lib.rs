//! Fair Max-Min diversification: pick `k_i` points from each group so that
//! the minimum pairwise distance of the selection is as large as possible.
//!
//! The crate provides the exact brute-force oracle, LP-rounding schemes,
//! greedy-cluster/max-flow selection, the exact 1-D solver, doubling-metric
//! coresets with the grid-shift Euclidean solver, single-pass streaming
//! variants, and composable coresets for a simulated two-round distributed
//! run.

pub mod cluster;
pub mod dataset;
pub mod distributed;
pub mod error;
pub mod euclidean;
pub mod fixtures;
pub mod flow;
pub mod guessing;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod rng;
pub mod solution;
pub mod streaming;
pub mod synth;

pub use cluster::ClusterFamily;
pub use dataset::{
    ball_members, diversity, validate, Ball, Dataset, FairnessSpec, Metric, Point,
    ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use solution::Solution;

/// DP cell budget; the `FAIRDIV_BUDGET_CELLS` environment variable
/// overrides the default of 1e8 cells.
pub fn dp_cell_budget() -> u64 {
    std::env::var("FAIRDIV_BUDGET_CELLS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000_000)
}
