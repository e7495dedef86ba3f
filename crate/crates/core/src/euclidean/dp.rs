//! Profile dynamic program over well-separated clusters.
//!
//! A profile is a per-group count vector achievable by a `gamma`-separated
//! subset of one cluster (componentwise capped at the targets). Clusters are
//! pairwise `gamma`-separated, so any per-cluster choices combine freely and
//! reachability over cluster prefixes is a set of profile vectors.

use crate::cluster::ClusterFamily;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::solution::Solution;
use std::collections::BTreeMap;

pub const DEFAULT_CLUSTER_CAP: usize = 24;

/// Mixed-radix profile coordinates with caps `targets[i]`.
#[derive(Debug, Clone)]
pub(crate) struct ProfileSpace {
    dims: Vec<usize>, // targets[i] + 1
    strides: Vec<usize>,
    pub total: usize,
}

impl ProfileSpace {
    pub fn new(targets: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = targets.iter().map(|&t| t + 1).collect();
        let mut strides = vec![0usize; dims.len()];
        let mut total: u128 = 1;
        for (i, &d) in dims.iter().enumerate() {
            strides[i] = total as usize;
            total *= d as u128;
            if total > u64::MAX as u128 {
                return Err(Error::DpBudgetExceeded { cells: total, budget: u64::MAX });
            }
        }
        Ok(Self { dims, strides, total: total as usize })
    }

    pub fn encode(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .zip(&self.strides)
            .map(|(&v, &s)| v * s)
            .sum()
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = code / self.strides[i];
            code %= self.strides[i];
        }
        out
    }
}

/// All per-group count vectors achievable by a `gamma`-separated subset of
/// `cluster`, capped componentwise at `caps`, each with its first witness
/// subset in lexicographic order. Includes the empty profile.
pub fn cluster_profiles(
    ds: &Dataset,
    cluster: &[usize],
    gamma: f64,
    caps: &[usize],
    cluster_cap: usize,
) -> Result<BTreeMap<Vec<usize>, Vec<usize>>> {
    if cluster.len() > cluster_cap {
        return Err(Error::ClusterTooLarge { size: cluster.len(), cap: cluster_cap });
    }
    let mut points = cluster.to_vec();
    points.sort_unstable();

    let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut profile = vec![0usize; caps.len()];
    out.insert(profile.clone(), vec![]);

    // Lexicographic subset tree: children extend with a higher-index point.
    fn grow(
        ds: &Dataset,
        points: &[usize],
        from: usize,
        gamma: f64,
        caps: &[usize],
        chosen: &mut Vec<usize>,
        profile: &mut Vec<usize>,
        out: &mut BTreeMap<Vec<usize>, Vec<usize>>,
    ) {
        for pos in from..points.len() {
            let p = points[pos];
            let g = ds.group_of(p);
            // A point whose group is already at its cap cannot create a new
            // profile, and skipping it only loosens later separation checks.
            if profile[g] >= caps[g] {
                continue;
            }
            if chosen.iter().any(|&q| ds.distance(p, q) < gamma) {
                continue;
            }
            chosen.push(p);
            profile[g] += 1;
            out.entry(profile.clone()).or_insert_with(|| chosen.clone());
            grow(ds, points, pos + 1, gamma, caps, chosen, profile, out);
            profile[g] -= 1;
            chosen.pop();
        }
    }
    grow(ds, &points, 0, gamma, caps, &mut chosen, &mut profile, &mut out);
    Ok(out)
}

#[derive(Debug, Clone)]
struct Backptr {
    cluster_profile: Vec<usize>,
    prev: usize,
}

/// One reachability level, dense or sparse depending on the cell budget.
enum Level {
    Dense(Vec<Option<Backptr>>),
    Sparse(BTreeMap<usize, Backptr>),
}

impl Level {
    fn new(dense: bool, total: usize) -> Self {
        if dense {
            Level::Dense(vec![None; total])
        } else {
            Level::Sparse(BTreeMap::new())
        }
    }

    fn contains(&self, code: usize) -> bool {
        match self {
            Level::Dense(v) => v[code].is_some(),
            Level::Sparse(m) => m.contains_key(&code),
        }
    }

    fn get(&self, code: usize) -> Option<&Backptr> {
        match self {
            Level::Dense(v) => v[code].as_ref(),
            Level::Sparse(m) => m.get(&code),
        }
    }

    fn insert_if_absent(&mut self, code: usize, bp: Backptr) {
        match self {
            Level::Dense(v) => {
                if v[code].is_none() {
                    v[code] = Some(bp);
                }
            }
            Level::Sparse(m) => {
                m.entry(code).or_insert(bp);
            }
        }
    }

    fn reachable_codes(&self) -> Vec<usize> {
        match self {
            Level::Dense(v) => {
                v.iter().enumerate().filter(|(_, b)| b.is_some()).map(|(c, _)| c).collect()
            }
            Level::Sparse(m) => m.keys().copied().collect(),
        }
    }
}

/// Combine per-cluster profiles across a pairwise `gamma`-separated cluster
/// family. Returns a selection meeting `targets` with diversity at least
/// `gamma`, or `None` when no such selection exists.
pub fn fair_dp(
    ds: &Dataset,
    clusters: &ClusterFamily,
    targets: &[usize],
    gamma: f64,
    cluster_cap: usize,
) -> Result<Option<Solution>> {
    debug_assert!(separation_spot_check(ds, clusters, gamma));
    let space = ProfileSpace::new(targets)?;
    let budget = crate::dp_cell_budget();
    let t = clusters.len();
    let cells = space.total as u128 * (t as u128 + 1);
    // Dense levels when they fit the cell budget, hash levels otherwise;
    // sparse occupancy is still counted so a blow-up aborts cleanly.
    let dense = cells <= budget as u128;
    let mut occupied: u64 = 0;

    let all_profiles: Vec<BTreeMap<Vec<usize>, Vec<usize>>> = clusters
        .clusters
        .iter()
        .map(|c| cluster_profiles(ds, c, gamma, targets, cluster_cap))
        .collect::<Result<_>>()?;

    let mut levels: Vec<Level> = Vec::with_capacity(t + 1);
    let mut base = Level::new(dense, space.total);
    base.insert_if_absent(0, Backptr { cluster_profile: vec![0; targets.len()], prev: 0 });
    levels.push(base);

    let goal = space.encode(targets);
    for j in 0..t {
        let mut next = Level::new(dense, space.total);
        for prev_code in levels[j].reachable_codes() {
            let prev = space.decode(prev_code);
            for profile in all_profiles[j].keys() {
                let combined: Vec<usize> = prev
                    .iter()
                    .zip(profile)
                    .zip(targets)
                    .map(|((&a, &b), &cap)| (a + b).min(cap))
                    .collect();
                let code = space.encode(&combined);
                next.insert_if_absent(
                    code,
                    Backptr { cluster_profile: profile.clone(), prev: prev_code },
                );
            }
        }
        if !dense {
            occupied += next.reachable_codes().len() as u64;
            if occupied > budget {
                return Err(Error::DpBudgetExceeded { cells: occupied as u128, budget });
            }
        }
        levels.push(next);
    }

    if !levels[t].contains(goal) {
        return Ok(None);
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut code = goal;
    for j in (0..t).rev() {
        let bp = levels[j + 1].get(code).expect("reachable code has a backpointer");
        let witness = all_profiles[j]
            .get(&bp.cluster_profile)
            .expect("backpointer stores an achievable profile");
        selected.extend_from_slice(witness);
        code = bp.prev;
    }
    Ok(Some(Solution::new(ds, selected, Some(gamma), 1, "fair-dp")))
}

/// Debug-mode sampling of cross-cluster pairs; the caller owns the full
/// separation guarantee.
#[cfg(debug_assertions)]
fn separation_spot_check(ds: &Dataset, clusters: &ClusterFamily, gamma: f64) -> bool {
    use rand::Rng;
    let t = clusters.len();
    if t < 2 {
        return true;
    }
    let mut rng = crate::rng::substream(0xD0, "dp-spot-check", t as u64);
    for _ in 0..32 {
        let a = rng.random_range(0..t);
        let b = rng.random_range(0..t);
        if a == b || clusters.clusters[a].is_empty() || clusters.clusters[b].is_empty() {
            continue;
        }
        let p = clusters.clusters[a][rng.random_range(0..clusters.clusters[a].len())];
        let q = clusters.clusters[b][rng.random_range(0..clusters.clusters[b].len())];
        if ds.distance(p, q) < gamma {
            return false;
        }
    }
    true
}

#[cfg(not(debug_assertions))]
fn separation_spot_check(_: &Dataset, _: &ClusterFamily, _: f64) -> bool {
    true
}
