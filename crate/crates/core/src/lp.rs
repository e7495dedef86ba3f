//! The feasibility LP over a guess `gamma` and its two randomized rounding
//! schemes.
//!
//! Variables `x_j >= 0`, one per point. Constraints: for every group i,
//! `sum_{p_j in X_i} x_j >= k_i`; for every point p, the open ball
//! `B(p, gamma/2)` may carry total weight at most 1. A feasible point exists
//! whenever `gamma <= 2 * l*`-ish territory, and in particular whenever
//! `gamma <= l*`, because the indicator of an optimal selection is feasible.
//!
//! The solver is a deterministic dense phase-1 simplex with Bland's pivoting
//! rule: there is no objective to optimize, only feasibility to decide, and
//! Bland keeps runs reproducible and cycle-free.

use crate::dataset::{ball_members, Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::guessing::{largest_feasible, pairwise_guesses};
use crate::solution::Solution;
use rand::Rng;

pub const FEAS_TOL: f64 = 1e-9;
pub const SUPPORT_TOL: f64 = 1e-12;

/// The feasibility system at one guess.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub n: usize,
    pub gamma: f64,
    /// Group constraint supports (ascending indices) with right-hand sides.
    pub group_rows: Vec<(Vec<usize>, usize)>,
    /// `balls[p]` = members of the open ball `B(p, gamma/2)`, ascending.
    pub balls: Vec<Vec<usize>>,
}

impl LpInstance {
    /// Plain-text dump: one row per line, `GE|LE c_1,...,c_n rhs`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut coeffs = vec![0u8; self.n];
        for (support, rhs) in &self.group_rows {
            coeffs.fill(0);
            for &j in support {
                coeffs[j] = 1;
            }
            let row: Vec<String> = coeffs.iter().map(u8::to_string).collect();
            out.push_str(&format!("GE {} {}\n", row.join(","), rhs));
        }
        for members in &self.balls {
            coeffs.fill(0);
            for &j in members {
                coeffs[j] = 1;
            }
            let row: Vec<String> = coeffs.iter().map(u8::to_string).collect();
            out.push_str(&format!("LE {} 1\n", row.join(",")));
        }
        out
    }
}

/// A solver outcome. When `feasible`, every constraint holds within
/// [`FEAS_TOL`] and `support` lists the indices with `x_j > 1e-12`.
#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub feasible: bool,
    pub support: Vec<usize>,
}

/// Same-group weight after redistribution; support points of one group are
/// `gamma/3`-separated and group sums are preserved.
#[derive(Debug, Clone)]
pub struct RedistributedSolution {
    pub y: Vec<f64>,
    pub gamma: f64,
}

pub fn build_lp(ds: &Dataset, spec: &FairnessSpec, gamma: f64) -> LpInstance {
    assert!(gamma > 0.0, "gamma must be positive");
    let group_rows = (0..ds.m())
        .map(|g| (ds.group_members(g).to_vec(), spec.quota(g)))
        .collect();
    let balls = (0..ds.n())
        .map(|p| ball_members(ds, p, gamma / 2.0))
        .collect();
    LpInstance { n: ds.n(), gamma, group_rows, balls }
}

/// Decide feasibility and return a witness. Deterministic for fixed input.
pub fn solve_feasibility(lp: &LpInstance) -> Result<FractionalSolution> {
    // Duplicate ball rows are common (coincident or mutually-close points);
    // solving over the distinct rows is equivalent.
    let mut distinct: Vec<&Vec<usize>> = lp.balls.iter().collect();
    distinct.sort();
    distinct.dedup();

    let x = match simplex_phase1(lp.n, &lp.group_rows, &distinct)? {
        Some(x) => x,
        None => {
            return Ok(FractionalSolution { x: vec![0.0; lp.n], feasible: false, support: vec![] })
        }
    };

    for (support, rhs) in &lp.group_rows {
        let total: f64 = support.iter().map(|&j| x[j]).sum();
        if total < *rhs as f64 - FEAS_TOL {
            return Err(Error::Numerical(format!(
                "simplex returned an infeasible point: group row sums to {total} < {rhs}"
            )));
        }
    }
    for members in &lp.balls {
        let total: f64 = members.iter().map(|&j| x[j]).sum();
        if total > 1.0 + FEAS_TOL {
            return Err(Error::Numerical(format!(
                "simplex returned an infeasible point: ball row sums to {total} > 1"
            )));
        }
    }

    let support = (0..lp.n).filter(|&j| x[j] > SUPPORT_TOL).collect();
    Ok(FractionalSolution { x, feasible: true, support })
}

/// Dense phase-1 simplex. Column order: structural x, surplus (one per GE
/// row), slack (one per LE row), artificial (one per GE row). Returns a
/// feasible x or `None` when the phase-1 optimum stays positive.
fn simplex_phase1(
    n: usize,
    group_rows: &[(Vec<usize>, usize)],
    ball_rows: &[&Vec<usize>],
) -> Result<Option<Vec<f64>>> {
    let n_ge = group_rows.len();
    let n_le = ball_rows.len();
    let rows = n_ge + n_le;
    let cols = n + n_ge + n_le + n_ge; // x | surplus | slack | artificial
    let width = cols + 1; // + rhs

    let mut t = vec![0.0f64; (rows + 1) * width]; // last row: reduced costs
    let rhs = cols;
    let sur = n;
    let slk = n + n_ge;
    let art = n + n_ge + n_le;

    for (r, (support, k)) in group_rows.iter().enumerate() {
        for &j in support {
            t[r * width + j] = 1.0;
        }
        t[r * width + sur + r] = -1.0;
        t[r * width + art + r] = 1.0;
        t[r * width + rhs] = *k as f64;
    }
    for (i, members) in ball_rows.iter().enumerate() {
        let r = n_ge + i;
        for &j in members.iter() {
            t[r * width + j] = 1.0;
        }
        t[r * width + slk + i] = 1.0;
        t[r * width + rhs] = 1.0;
    }

    // Phase-1 cost: minimize the artificial sum. Reduced-cost row starts as
    // the cost vector minus the rows of the initially-basic artificials.
    let cost_row = rows * width;
    for r in 0..n_ge {
        t[cost_row + art + r] = 1.0;
    }
    for r in 0..n_ge {
        for c in 0..width {
            t[cost_row + c] -= t[r * width + c];
        }
    }

    let mut basis: Vec<usize> = (0..n_ge)
        .map(|r| art + r)
        .chain((0..n_le).map(|i| slk + i))
        .collect();

    let max_iters = 1000 + 20 * (rows + cols);
    for _ in 0..max_iters {
        // Bland: entering column = lowest index with negative reduced cost.
        let mut enter = None;
        for c in 0..cols {
            if t[cost_row + c] < -FEAS_TOL {
                enter = Some(c);
                break;
            }
        }
        let enter = match enter {
            Some(c) => c,
            None => {
                let objective = -t[cost_row + rhs];
                if objective > FEAS_TOL {
                    return Ok(None); // infeasible
                }
                let mut x = vec![0.0f64; n];
                for (r, &b) in basis.iter().enumerate() {
                    if b < n {
                        x[b] = t[r * width + rhs].max(0.0);
                    }
                }
                return Ok(Some(x));
            }
        };

        // Ratio test; ties: smallest basis variable index (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = t[r * width + enter];
            if a > 1e-11 {
                let ratio = t[r * width + rhs] / a;
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - 1e-12
                            || ((ratio - lratio).abs() <= 1e-12 && basis[r] < basis[lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let (prow, _) = leave.ok_or_else(|| {
            Error::Numerical("phase-1 column unbounded; the system is malformed".into())
        })?;

        let pivot = t[prow * width + enter];
        for c in 0..width {
            t[prow * width + c] /= pivot;
        }
        for r in 0..=rows {
            if r == prow {
                continue;
            }
            let factor = t[r * width + enter];
            if factor != 0.0 {
                for c in 0..width {
                    t[r * width + c] -= factor * t[prow * width + c];
                }
            }
        }
        basis[prow] = enter;
    }
    Err(Error::Numerical(format!("simplex exceeded {max_iters} iterations")))
}

/// Sequential sampling without replacement, probability proportional to the
/// remaining weights. Returns the drawn order of indices into `weights`.
pub fn weighted_permutation<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<Vec<usize>> {
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::ZeroWeights);
    }
    let mut remaining: Vec<usize> = (0..weights.len()).collect();
    let mut order = Vec::with_capacity(weights.len());
    while !remaining.is_empty() {
        let total: f64 = remaining.iter().map(|&i| weights[i]).sum();
        let mut pick = remaining.len() - 1;
        if total > 0.0 {
            let mut u = rng.random_range(0.0..total);
            for (pos, &i) in remaining.iter().enumerate() {
                u -= weights[i];
                if u <= 0.0 {
                    pick = pos;
                    break;
                }
            }
        }
        order.push(remaining.remove(pick));
    }
    Ok(order)
}

/// Positions of each support member in a fresh weighted permutation:
/// `sigma[j] < sigma[l]` means j precedes l.
fn draw_positions<R: Rng + ?Sized>(
    support: &[usize],
    weights: &[f64],
    rng: &mut R,
) -> Result<Vec<usize>> {
    let w: Vec<f64> = support.iter().map(|&j| weights[j]).collect();
    let order = weighted_permutation(&w, rng)?;
    let mut pos = vec![0usize; support.len()];
    for (rank, &local) in order.iter().enumerate() {
        pos[local] = rank;
    }
    Ok(pos)
}

/// Select every support point that comes first (in the permutation) within
/// its own open ball of radius `radius`. Any two selected points are then
/// at distance >= radius.
fn select_ball_minima(
    ds: &Dataset,
    support: &[usize],
    pos: &[usize],
    radius: f64,
) -> Vec<usize> {
    let mut selected = Vec::new();
    for (a, &j) in support.iter().enumerate() {
        let mut is_min = true;
        for (b, &l) in support.iter().enumerate() {
            if b != a && ds.distance(j, l) < radius && pos[b] < pos[a] {
                is_min = false;
                break;
            }
        }
        if is_min {
            selected.push(j);
        }
    }
    selected
}

/// Expected-fairness rounding: 2-approximate diversity at the chosen gamma, with
/// each group quota met in expectation.
pub fn round_expected_fair<R: Rng + ?Sized>(
    ds: &Dataset,
    _spec: &FairnessSpec,
    gamma: f64,
    frac: &FractionalSolution,
    rng: &mut R,
) -> Result<Solution> {
    let pos = draw_positions(&frac.support, &frac.x, rng)?;
    let selected = select_ball_minima(ds, &frac.support, &pos, gamma / 2.0);
    Ok(Solution::new(ds, selected, Some(gamma), 1, "lp2"))
}

/// Move same-group weight inside `gamma/3` balls onto one representative.
/// Points are processed in ascending index order; each unit of weight moves
/// exactly once, so per-group sums are preserved.
pub fn redistribute_weights(
    ds: &Dataset,
    _spec: &FairnessSpec,
    gamma: f64,
    frac: &FractionalSolution,
) -> RedistributedSolution {
    let n = ds.n();
    let mut y: Vec<Option<f64>> = vec![None; n];
    for j in 0..n {
        if frac.x[j] <= 0.0 || y[j].is_some() {
            continue;
        }
        let g = ds.group_of(j);
        let mut total = 0.0;
        let mut absorbed = Vec::new();
        for &l in ds.group_members(g) {
            if y[l].is_none() && ds.distance(j, l) < gamma / 3.0 {
                total += frac.x[l];
                if l != j {
                    absorbed.push(l);
                }
            }
        }
        y[j] = Some(total);
        for l in absorbed {
            y[l] = Some(0.0);
        }
    }
    let y = y.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    RedistributedSolution { y, gamma }
}

/// Concentrated rounding over the redistributed weights: separation
/// `gamma/6` per trial, and up to `ceil(log2(1/delta))` trials to land
/// `ceil((1-eps) k_i)` points per group.
pub fn round_concentrated<R: Rng + ?Sized>(
    ds: &Dataset,
    spec: &FairnessSpec,
    gamma: f64,
    redistributed: &RedistributedSolution,
    eps: f64,
    delta: f64,
    rng: &mut R,
) -> Result<Solution> {
    let y = &redistributed.y;
    let support: Vec<usize> = (0..ds.n()).filter(|&j| y[j] > SUPPORT_TOL).collect();
    if support.is_empty() {
        return Err(Error::ZeroWeights);
    }
    let needed = (3.0 / (eps * eps)) * (2.0 * spec.m() as f64).ln();
    for g in 0..spec.m() {
        if spec.quota(g) > 0 && (spec.quota(g) as f64) < needed {
            log::warn!(
                "group {} quota {} is below the concentration threshold {:.1}; \
                 the (1-eps) fairness bound is not guaranteed (greedy-flow gives exact quotas)",
                g + 1,
                spec.quota(g),
                needed
            );
        }
    }
    let targets: Vec<usize> = (0..spec.m())
        .map(|g| ((1.0 - eps) * spec.quota(g) as f64).ceil() as usize)
        .collect();

    let trials = (1.0 / delta).log2().ceil().max(1.0) as u32;
    let mut best: Option<(f64, Solution)> = None;
    for trial in 0..trials {
        let pos = draw_positions(&support, y, rng)?;
        let selected = select_ball_minima(ds, &support, &pos, gamma / 6.0);
        let sol = Solution::new(ds, selected, Some(gamma), trial + 1, "lp6");
        let fair = (0..spec.m()).all(|g| sol.group_counts[g] >= targets[g]);
        if fair {
            return Ok(sol);
        }
        let fill = (0..spec.m())
            .filter(|&g| spec.quota(g) > 0)
            .map(|g| sol.group_counts[g] as f64 / spec.quota(g) as f64)
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().map_or(true, |(b, _)| fill > *b) {
            best = Some((fill, sol));
        }
    }
    let (_, mut sol) = best.expect("at least one trial ran");
    sol.trials = trials;
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    /// 2-approximate diversity, quotas met in expectation.
    Expected2,
    /// 6-approximate diversity, `(1-eps)` quotas with high probability.
    Concentrated6,
}

/// Find the largest LP-feasible pairwise guess, then round there. LP
/// feasibility is monotone non-increasing in gamma (growing balls only
/// tighten the packing constraints), so binary search applies.
pub fn lp_pipeline<R: Rng + ?Sized>(
    ds: &Dataset,
    spec: &FairnessSpec,
    eps: f64,
    mode: RoundingMode,
    delta: f64,
    rng: &mut R,
) -> Result<Solution> {
    let (gamma, frac) = lp_schedule_search(ds, spec)?;
    round_at(ds, spec, gamma, &frac, eps, mode, delta, rng)
}

/// The deterministic LP phase of the pipeline, reusable across repeated
/// rounding runs: largest feasible pairwise gamma and its witness.
pub fn lp_schedule_search(ds: &Dataset, spec: &FairnessSpec) -> Result<(f64, FractionalSolution)> {
    spec.check_feasible(ds)?;
    let schedule = pairwise_guesses(ds)?;
    let gamma = largest_feasible(&schedule, |g| {
        Ok(solve_feasibility(&build_lp(ds, spec, g))?.feasible)
    })?
    .ok_or_else(|| {
        Error::NoFeasibleGuess("the LP is infeasible at every pairwise distance".into())
    })?;
    let frac = solve_feasibility(&build_lp(ds, spec, gamma))?;
    debug_assert!(frac.feasible);
    Ok((gamma, frac))
}

/// The randomized phase of the pipeline at a fixed feasible gamma.
#[allow(clippy::too_many_arguments)]
pub fn round_at<R: Rng + ?Sized>(
    ds: &Dataset,
    spec: &FairnessSpec,
    gamma: f64,
    frac: &FractionalSolution,
    eps: f64,
    mode: RoundingMode,
    delta: f64,
    rng: &mut R,
) -> Result<Solution> {
    match mode {
        RoundingMode::Expected2 => round_expected_fair(ds, spec, gamma, frac, rng),
        RoundingMode::Concentrated6 => {
            let red = redistribute_weights(ds, spec, gamma, frac);
            round_concentrated(ds, spec, gamma, &red, eps, delta, rng)
        }
    }
}
