//! Euclidean-metric machinery: the exact 1-D dynamic program, farthest-point
//! coresets for doubling metrics, the cluster profile DP, and the grid-shift
//! bi-criteria solver built on top of them.

mod cubes;
mod dp;
mod gmm;
mod line;

pub use cubes::{dump_cubes, fair_euclidean, fair_euclidean_search, partition_into_cubes};
pub use dp::{cluster_profiles, fair_dp, DEFAULT_CLUSTER_CAP};
pub use gmm::{build_coreset, coreset_size_bound, gmm, maximal_prefix, CoresetBundle, GmmOrdering};
pub use line::{fair_line, fair_line_opt};
