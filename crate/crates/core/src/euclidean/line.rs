//! Exact solver for points on a line.
//!
//! For a guess `gamma` the table entry (profile, j) records whether some
//! subset of the first j points (in coordinate order) is `gamma`-separated
//! and hits the profile counts. Taking point j jumps back to the largest j'
//! with `d(p_j', p_j) >= gamma`; on a line that point dominates all closer
//! predecessors, which is what makes the program exact.

use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::guessing::{largest_feasible, pairwise_guesses};
use crate::solution::Solution;

use super::dp::ProfileSpace;

fn sorted_line_order(ds: &Dataset) -> Result<Vec<usize>> {
    if !ds.is_euclidean() || ds.dim() != Some(1) {
        return Err(Error::ModeMismatch {
            op: "fair_line",
            detail: format!("need 1-D coordinates, have dim {:?}", ds.dim()),
        });
    }
    let coord = |i: usize| ds.point(i).coords.as_ref().unwrap()[0];
    let mut order: Vec<usize> = (0..ds.n()).collect();
    order.sort_by(|&a, &b| coord(a).total_cmp(&coord(b)).then(a.cmp(&b)));
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    Unreached,
    Carry,
    /// Take the point at this position; parent level is `jprime`.
    Take { jprime: usize },
}

/// Quota-exact selection with diversity at least `gamma`, or `None`.
pub fn fair_line(ds: &Dataset, spec: &FairnessSpec, gamma: f64) -> Result<Option<Solution>> {
    assert!(gamma > 0.0, "gamma must be positive");
    spec.check_feasible(ds)?;
    let order = sorted_line_order(ds)?;
    let n = order.len();
    let space = ProfileSpace::new(spec.quotas())?;
    let cells = space.total as u128 * (n as u128 + 1);
    let budget = crate::dp_cell_budget();
    if cells > budget as u128 {
        return Err(Error::DpBudgetExceeded { cells, budget });
    }

    // jprime[j] = largest 1-based position j' < j with
    // d(order[j'-1], order[j-1]) >= gamma; 0 when none. Distances to earlier
    // points grow monotonically leftward, so binary search applies.
    let jprime: Vec<usize> = (0..n)
        .map(|j| {
            let (mut lo, mut hi) = (0usize, j); // candidate count in 1..=j
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if ds.distance(order[mid - 1], order[j]) >= gamma {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        })
        .collect();

    let mut table: Vec<Vec<Step>> = vec![vec![Step::Unreached; space.total]; n + 1];
    table[0][0] = Step::Carry;
    for j in 1..=n {
        let g = ds.group_of(order[j - 1]);
        for code in 0..space.total {
            if !matches!(table[j - 1][code], Step::Unreached) {
                table[j][code] = Step::Carry;
            }
        }
        for code in 0..space.total {
            if !matches!(table[j][code], Step::Unreached) {
                continue;
            }
            let profile = space.decode(code);
            if profile[g] == 0 {
                continue;
            }
            let mut parent = profile.clone();
            parent[g] -= 1;
            if !matches!(table[jprime[j - 1]][space.encode(&parent)], Step::Unreached) {
                table[j][code] = Step::Take { jprime: jprime[j - 1] };
            }
        }
    }

    let goal = space.encode(spec.quotas());
    let mut level = n;
    if matches!(table[level][goal], Step::Unreached) {
        return Ok(None);
    }
    let mut selected = Vec::with_capacity(spec.k());
    let mut code = goal;
    while code != 0 {
        match table[level][code] {
            Step::Carry => level -= 1,
            Step::Take { jprime } => {
                let p = order[level - 1];
                selected.push(p);
                let mut profile = space.decode(code);
                profile[ds.group_of(p)] -= 1;
                code = space.encode(&profile);
                level = jprime;
            }
            Step::Unreached => unreachable!("walk only visits reached entries"),
        }
    }
    Ok(Some(Solution::new(ds, selected, Some(gamma), 1, "line")))
}

/// Exact optimum on a line: the largest pairwise-distance guess at which
/// [`fair_line`] succeeds. Feasibility is monotone in gamma by definition
/// of diversity, so binary search is sound. When even the smallest positive
/// guess fails (duplicates force a zero-diversity selection), any
/// quota-exact set is optimal and a greedy fill is returned.
pub fn fair_line_opt(ds: &Dataset, spec: &FairnessSpec) -> Result<Solution> {
    spec.check_feasible(ds)?;
    let order = sorted_line_order(ds)?;
    if ds.n() < 2 || spec.k() <= 1 {
        // Any quota-exact pick is optimal (diversity unbounded for k <= 1).
        return greedy_fill(ds, spec, &order);
    }
    let schedule = match pairwise_guesses(ds) {
        Ok(s) => s,
        // All points coincide: every quota-exact set has diversity zero.
        Err(Error::EmptySchedule(_)) => return greedy_fill(ds, spec, &order),
        Err(e) => return Err(e),
    };
    match largest_feasible(&schedule, |g| Ok(fair_line(ds, spec, g)?.is_some()))? {
        Some(gamma) => {
            let mut sol = fair_line(ds, spec, gamma)?.expect("gamma came from a successful probe");
            sol.algorithm_tag = "line-opt".into();
            Ok(sol)
        }
        None => greedy_fill(ds, spec, &order),
    }
}

fn greedy_fill(ds: &Dataset, spec: &FairnessSpec, order: &[usize]) -> Result<Solution> {
    let mut counts = vec![0usize; ds.m()];
    let mut selected = Vec::with_capacity(spec.k());
    for &p in order {
        let g = ds.group_of(p);
        if counts[g] < spec.quota(g) {
            counts[g] += 1;
            selected.push(p);
        }
    }
    Ok(Solution::new(ds, selected, None, 1, "line-opt"))
}
