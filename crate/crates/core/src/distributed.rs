//! Composable coresets and the simulated two-round coordinator protocol.
//! Sites are in-process; an explicit ledger counts the point records that
//! would cross the wire, which is what makes the space claims testable.

use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::euclidean::{build_coreset, coreset_size_bound, fair_euclidean_search, gmm, GmmOrdering};
use crate::lp::{lp_pipeline, RoundingMode};
use crate::oracle::brute_force_opt;
use crate::solution::Solution;
use rand::Rng;
use std::collections::BTreeSet;

/// Disjoint site assignment (global point indices per site).
#[derive(Debug, Clone)]
pub struct SitePartition {
    pub sites: Vec<Vec<usize>>,
}

impl SitePartition {
    pub fn round_robin(ds: &Dataset, sites: usize) -> Self {
        assert!(sites >= 1);
        let mut out = vec![Vec::new(); sites];
        for i in 0..ds.n() {
            out[i % sites].push(i);
        }
        Self { sites: out }
    }

    /// Stable id-hash placement.
    pub fn by_hash(ds: &Dataset, sites: usize) -> Self {
        assert!(sites >= 1);
        let mut out = vec![Vec::new(); sites];
        for i in 0..ds.n() {
            let mut h: u64 = 0xcbf29ce484222325;
            for b in ds.point(i).id.as_bytes() {
                h ^= *b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
            out[(h % sites as u64) as usize].push(i);
        }
        Self { sites: out }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Round-1 output of one site: per-group farthest-point orderings over the
/// site's own points, radii retained.
#[derive(Debug, Clone)]
pub struct LocalCoreset {
    pub site: usize,
    pub per_group: Vec<GmmOrdering>,
}

impl LocalCoreset {
    pub fn points(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.per_group.iter().flat_map(|o| o.order.iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// Net radius per group: the last insertion radius when the size bound
    /// truncated the group, zero when the whole group was copied (then the
    /// ordering covers every site point of that group exactly).
    pub fn group_radii(&self, ds: &Dataset, site_points: &[usize]) -> Vec<f64> {
        (0..ds.m())
            .map(|g| {
                let site_group =
                    site_points.iter().filter(|&&p| ds.group_of(p) == g).count();
                let o = &self.per_group[g];
                if o.order.len() < site_group {
                    o.insertion_radii.last().copied().unwrap_or(0.0)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Run the per-group traversal on one site's slice.
pub fn local_coreset(
    ds: &Dataset,
    site: usize,
    site_points: &[usize],
    spec: &FairnessSpec,
    eps: f64,
    lambda: u32,
) -> Result<LocalCoreset> {
    let bound = coreset_size_bound(eps, lambda, spec.k());
    let mut per_group = Vec::with_capacity(ds.m());
    for g in 0..ds.m() {
        let members: Vec<usize> =
            site_points.iter().copied().filter(|&p| ds.group_of(p) == g).collect();
        if members.is_empty() {
            per_group.push(GmmOrdering { order: vec![], insertion_radii: vec![] });
        } else {
            per_group.push(gmm(ds, &members, bound.min(members.len()), &[])?);
        }
    }
    Ok(LocalCoreset { site, per_group })
}

/// Union of the local coresets, grouped; sites must be disjoint.
#[derive(Debug, Clone)]
pub struct ComposedCoreset {
    pub per_group: Vec<Vec<usize>>,
}

impl ComposedCoreset {
    pub fn union(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.per_group.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn total_size(&self) -> usize {
        self.per_group.iter().map(Vec::len).sum()
    }
}

pub fn compose(ds: &Dataset, locals: &[LocalCoreset]) -> Result<ComposedCoreset> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for lc in locals {
        for p in lc.points() {
            if !seen.insert(p) {
                return Err(Error::OverlappingPartitions(ds.point(p).id.clone()));
            }
        }
    }
    let mut per_group = vec![Vec::new(); ds.m()];
    for lc in locals {
        for (g, o) in lc.per_group.iter().enumerate() {
            per_group[g].extend(o.order.iter().copied());
        }
    }
    for group in &mut per_group {
        group.sort_unstable();
    }
    Ok(ComposedCoreset { per_group })
}

/// Coordinator-side solver choice for round 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalSolver {
    Brute,
    FairEuclidean,
    Lp6,
}

/// Point records shipped to the coordinator.
#[derive(Debug, Clone, Copy, Default)]
pub struct WireLedger {
    pub point_records: usize,
}

/// Round 1 computes local coresets site by site; round 2 solves on the
/// composed union at the coordinator. `delta` feeds the randomized finals.
#[allow(clippy::too_many_arguments)]
pub fn two_round_solve<R: Rng + ?Sized>(
    ds: &Dataset,
    partition: &SitePartition,
    spec: &FairnessSpec,
    eps: f64,
    lambda: u32,
    final_solver: FinalSolver,
    delta: f64,
    rng: &mut R,
) -> Result<(Solution, WireLedger)> {
    let locals: Vec<LocalCoreset> = partition
        .sites
        .iter()
        .enumerate()
        .map(|(j, pts)| local_coreset(ds, j, pts, spec, eps, lambda))
        .collect::<Result<_>>()?;
    let ledger = WireLedger {
        point_records: locals.iter().map(|lc| lc.points().len()).sum(),
    };
    let composed = compose(ds, &locals)?;
    let union = composed.union();
    let sub = ds.restrict(&union);
    let sol = match final_solver {
        FinalSolver::Brute => brute_force_opt(&sub, spec)?,
        FinalSolver::FairEuclidean => {
            fair_euclidean_search(&sub, spec, eps, delta, Some(lambda), rng)?
        }
        FinalSolver::Lp6 => {
            lp_pipeline(&sub, spec, eps, RoundingMode::Concentrated6, delta, rng)?
        }
    };
    let mut sol = sol.into_parent(ds, &union);
    sol.algorithm_tag = format!("distributed-{}", sol.algorithm_tag);
    Ok((sol, ledger))
}

/// Convenience used by tests: offline coreset of the whole dataset via the
/// same code path as `L = 1`.
pub fn single_site_equivalent(ds: &Dataset, spec: &FairnessSpec, eps: f64, lambda: u32) -> Result<Vec<usize>> {
    Ok(build_coreset(ds, spec, eps, lambda)?.union())
}
