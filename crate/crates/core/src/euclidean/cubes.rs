//! Grid-shift bi-criteria solver. For a guess `gamma`, thin each group's
//! coreset ordering to an `eps*gamma/4`-separated prefix, drop everything
//! within `gamma/2` of a randomly shifted cube boundary (side `2mD*gamma/eps`),
//! and run the profile DP over the surviving cubes: points in distinct cubes
//! are then at least `gamma` apart, so any DP answer has diversity `gamma`.

use crate::cluster::ClusterFamily;
use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::solution::{keep_best, Solution};
use rand::Rng;
use std::collections::BTreeMap;

use super::dp::{fair_dp, DEFAULT_CLUSTER_CAP};
use super::gmm::{build_coreset, maximal_prefix, CoresetBundle};

/// Cube partition of the separated prefixes for one shift: survivors keyed
/// by integer cube index, boundary-adjacent points dropped.
pub fn partition_into_cubes(
    ds: &Dataset,
    coreset: &CoresetBundle,
    gamma: f64,
    eps: f64,
    shift: &[f64],
) -> Result<BTreeMap<Vec<i64>, Vec<usize>>> {
    let dims = ds.dim().ok_or(Error::ModeMismatch {
        op: "fair_euclidean",
        detail: "matrix-backed dataset".into(),
    })?;
    let side = 2.0 * ds.m() as f64 * dims as f64 * gamma / eps;
    let mut cubes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for ordering in &coreset.per_group {
        if ordering.order.is_empty() {
            continue;
        }
        for &p in &maximal_prefix(ordering, eps * gamma / 4.0) {
            let coords = ds.point(p).coords.as_ref().unwrap();
            let mut key = Vec::with_capacity(dims);
            let mut survives = true;
            for d in 0..dims {
                let rel = coords[d] - shift[d];
                let cell = (rel / side).floor();
                let offset = rel - side * cell;
                if offset < gamma / 2.0 || offset > side - gamma / 2.0 {
                    survives = false;
                    break;
                }
                key.push(cell as i64);
            }
            if survives {
                cubes.entry(key).or_default().push(p);
            }
        }
    }
    Ok(cubes)
}

/// Debug dump: one `cube-index: point ids` line per nonempty cube.
pub fn dump_cubes(ds: &Dataset, cubes: &BTreeMap<Vec<i64>, Vec<usize>>) -> String {
    let mut out = String::new();
    for (key, members) in cubes {
        let idx: Vec<String> = key.iter().map(i64::to_string).collect();
        let ids: Vec<&str> = members.iter().map(|&p| ds.point(p).id.as_str()).collect();
        out.push_str(&format!("({}): {}\n", idx.join(","), ids.join(",")));
    }
    out
}

/// One shift attempt. `Ok(None)` means this shift failed; errors surface
/// enumeration blow-ups.
pub fn fair_euclidean<R: Rng + ?Sized>(
    ds: &Dataset,
    coreset: &CoresetBundle,
    spec: &FairnessSpec,
    gamma: f64,
    eps: f64,
    rng: &mut R,
) -> Result<Option<Solution>> {
    assert!(gamma > 0.0 && eps > 0.0 && eps <= 1.0);
    let dims = ds.dim().ok_or(Error::ModeMismatch {
        op: "fair_euclidean",
        detail: "matrix-backed dataset".into(),
    })?;
    let m = ds.m();
    let side = 2.0 * m as f64 * dims as f64 * gamma / eps;
    let shift: Vec<f64> = (0..dims).map(|_| rng.random_range(0.0..side)).collect();
    let cubes = partition_into_cubes(ds, coreset, gamma, eps, &shift)?;

    let targets: Vec<usize> = (0..m)
        .map(|g| ((1.0 - eps) * spec.quota(g) as f64).ceil() as usize)
        .collect();
    let family = ClusterFamily { clusters: cubes.into_values().collect() };
    let sol = fair_dp(ds, &family, &targets, gamma, DEFAULT_CLUSTER_CAP)?;
    Ok(sol.map(|mut s| {
        s.algorithm_tag = "fair-euclidean".into();
        s
    }))
}

/// Full driver: build the coreset once, take guesses from its pairwise
/// distances, and give each guess `ceil(log2(1/delta))` independent shifts.
/// Succeeds with diversity `l*/(1+eps)`-grade quality and at least
/// `ceil((1-eps) k_i)` points per group, with probability `1 - delta` per
/// the boundary-loss argument.
pub fn fair_euclidean_search<R: Rng + ?Sized>(
    ds: &Dataset,
    spec: &FairnessSpec,
    eps: f64,
    delta: f64,
    lambda: Option<u32>,
    rng: &mut R,
) -> Result<Solution> {
    spec.check_feasible(ds)?;
    let dims = ds.dim().ok_or(Error::ModeMismatch {
        op: "fair_euclidean_search",
        detail: "matrix-backed dataset".into(),
    })? as u32;
    let lambda = lambda.unwrap_or(dims.max(1));
    let coreset = build_coreset(ds, spec, eps, lambda)?;

    let union = coreset.union();
    let mut guesses: Vec<f64> = Vec::new();
    for (a, &i) in union.iter().enumerate() {
        for &j in &union[a + 1..] {
            let d = ds.distance(i, j);
            if d > 0.0 {
                guesses.push(d);
            }
        }
    }
    guesses.sort_unstable_by(f64::total_cmp);
    guesses.dedup();
    if guesses.is_empty() {
        return Err(Error::EmptySchedule("coreset points all coincide".into()));
    }

    let shifts = (1.0 / delta).log2().ceil().max(1.0) as u32;
    let mut best: Option<Solution> = None;
    let mut failed_guesses = 0usize;
    let mut enumeration_errors = 0usize;
    for &gamma in &guesses {
        let mut found = false;
        for trial in 0..shifts {
            match fair_euclidean(ds, &coreset, spec, gamma, eps, rng) {
                Ok(Some(mut sol)) => {
                    sol.trials = trial + 1;
                    keep_best(&mut best, sol);
                    found = true;
                    break;
                }
                Ok(None) => {}
                Err(Error::ClusterTooLarge { .. }) | Err(Error::DpBudgetExceeded { .. }) => {
                    enumeration_errors += 1;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !found {
            failed_guesses += 1;
        }
    }
    best.ok_or_else(|| {
        Error::NoFeasibleGuess(format!(
            "no shift succeeded at any of {} guesses ({} guesses failed, {} hit enumeration caps)",
            guesses.len(),
            failed_guesses,
            enumeration_errors
        ))
    })
}
