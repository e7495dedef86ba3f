//! Exact brute-force solver and the alpha/beta verification predicate.
//! This is the ground truth the rest of the test suite is judged against,
//! so it stays deliberately simple: per-group combinations composed across
//! groups with branch-and-bound pruning on the running minimum distance.

use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::solution::Solution;

/// Default cap on the number of candidate subsets the oracle will consider.
pub const DEFAULT_BUDGET: f64 = 5e7;

/// Exact optimum by enumeration. Ties between optimal subsets break toward
/// the lexicographically smallest index set, so the result is deterministic.
pub fn brute_force_opt(ds: &Dataset, spec: &FairnessSpec) -> Result<Solution> {
    brute_force_opt_with_budget(ds, spec, DEFAULT_BUDGET)
}

pub fn brute_force_opt_with_budget(
    ds: &Dataset,
    spec: &FairnessSpec,
    budget: f64,
) -> Result<Solution> {
    spec.check_feasible(ds)?;
    let candidates = candidate_count(ds, spec);
    if candidates > budget {
        return Err(Error::BudgetExceeded { candidates, budget });
    }

    let mut search = Search {
        ds,
        spec,
        chosen: Vec::with_capacity(spec.k()),
        best: None,
    };
    search.per_group(0, f64::INFINITY);
    let selected = search.best.expect("feasible quotas admit at least one subset").0;
    Ok(Solution::new(ds, selected, None, 1, "brute"))
}

fn candidate_count(ds: &Dataset, spec: &FairnessSpec) -> f64 {
    let mut total = 1.0f64;
    for g in 0..ds.m() {
        total *= binomial(ds.group_members(g).len(), spec.quota(g));
    }
    total
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

struct Search<'a> {
    ds: &'a Dataset,
    spec: &'a FairnessSpec,
    chosen: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
}

impl Search<'_> {
    /// Recurse over groups; within group `g` choose `quota(g)` members in
    /// ascending-combination order.
    fn per_group(&mut self, g: usize, running_min: f64) {
        if g == self.ds.m() {
            self.offer(running_min);
            return;
        }
        let members = self.ds.group_members(g).to_vec();
        let need = self.spec.quota(g);
        self.combos(&members, 0, need, g, running_min);
    }

    fn combos(&mut self, members: &[usize], from: usize, need: usize, g: usize, running_min: f64) {
        if need == 0 {
            self.per_group(g + 1, running_min);
            return;
        }
        // Not enough members left to fill the quota.
        if members.len() - from < need {
            return;
        }
        for pos in from..=(members.len() - need) {
            let p = members[pos];
            let mut next_min = running_min;
            for &q in &self.chosen {
                let d = self.ds.distance(p, q);
                if d < next_min {
                    next_min = d;
                }
            }
            // Prune strictly; an equal running minimum can still tie the
            // incumbent and win on the lexicographic rule.
            if let Some((_, best_div)) = &self.best {
                if next_min < *best_div {
                    continue;
                }
            }
            self.chosen.push(p);
            self.combos(members, pos + 1, need - 1, g, next_min);
            self.chosen.pop();
        }
    }

    fn offer(&mut self, div: f64) {
        let mut sorted = self.chosen.clone();
        sorted.sort_unstable();
        match &self.best {
            Some((best_sel, best_div)) => {
                if div > *best_div || (div == *best_div && sorted < *best_sel) {
                    self.best = Some((sorted, div));
                }
            }
            None => self.best = Some((sorted, div)),
        }
    }
}

/// Outcome of the alpha/beta check against the exact optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub diversity_ok: bool,
    pub fairness_ok: bool,
    pub optimum: f64,
    pub required_diversity: f64,
}

/// `pass` iff `div(solution) >= l*/alpha` and, for every group,
/// `|S ∩ X_i| >= ceil(beta * k_i)`.
pub fn verify(
    ds: &Dataset,
    spec: &FairnessSpec,
    solution: &Solution,
    alpha: f64,
    beta: f64,
) -> Result<Verdict> {
    if alpha.is_nan() || alpha < 1.0 {
        return Err(Error::Unsupported(format!("alpha must be >= 1, got {alpha}")));
    }
    if beta.is_nan() || beta <= 0.0 || beta > 1.0 {
        return Err(Error::Unsupported(format!("beta must be in (0, 1], got {beta}")));
    }
    let opt = brute_force_opt(ds, spec)?;
    let required = opt.diversity / alpha;
    let diversity_ok = solution.diversity >= required;
    let fairness_ok = (0..spec.m())
        .all(|g| solution.group_counts[g] >= (beta * spec.quota(g) as f64).ceil() as usize);
    Ok(Verdict {
        pass: diversity_ok && fairness_ok,
        diversity_ok,
        fairness_ok,
        optimum: opt.diversity,
        required_diversity: required,
    })
}
