//! Guess schedules for the unknown optimum and the search drivers over them.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::solution::{keep_best, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Pairwise,
    Geometric,
}

/// Strictly increasing positive guess values.
#[derive(Debug, Clone)]
pub struct GuessSchedule {
    pub values: Vec<f64>,
    pub kind: ScheduleKind,
}

/// Sorted distinct positive pairwise distances of the dataset.
pub fn pairwise_guesses(ds: &Dataset) -> Result<GuessSchedule> {
    if ds.n() < 2 {
        return Err(Error::EmptySchedule("need at least two points".into()));
    }
    let mut values = Vec::new();
    for i in 0..ds.n() {
        for j in (i + 1)..ds.n() {
            let d = ds.distance(i, j);
            if d > 0.0 {
                values.push(d);
            }
        }
    }
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    if values.is_empty() {
        return Err(Error::EmptySchedule("all points coincide".into()));
    }
    Ok(GuessSchedule { values, kind: ScheduleKind::Pairwise })
}

/// Geometric grid `d_lo * (1+eps)^t` for t = 0.. while below `d_hi`, with
/// `d_hi` itself appended so the range endpoint is always covered.
pub fn geometric_guesses(d_lo: f64, d_hi: f64, eps: f64) -> Result<GuessSchedule> {
    if !(d_lo > 0.0 && d_hi >= d_lo && eps > 0.0) {
        return Err(Error::EmptySchedule(format!(
            "need 0 < d_lo <= d_hi and eps > 0, got ({d_lo}, {d_hi}, {eps})"
        )));
    }
    let mut values = Vec::new();
    let mut v = d_lo;
    while v < d_hi {
        values.push(v);
        v *= 1.0 + eps;
    }
    values.push(d_hi);
    Ok(GuessSchedule { values, kind: ScheduleKind::Geometric })
}

/// Binary search for the largest schedule value satisfying a monotone
/// predicate (feasible at gamma implies feasible at every smaller gamma).
/// Returns `None` when even the smallest value fails. The caller asserts
/// monotonicity; for predicates without that proof use [`scan_best`].
pub fn largest_feasible<F>(schedule: &GuessSchedule, mut feasible: F) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<bool>,
{
    let vals = &schedule.values;
    if vals.is_empty() {
        return Ok(None);
    }
    if !feasible(vals[0])? {
        return Ok(None);
    }
    // Invariant: vals[lo] feasible, vals[hi] infeasible (or hi == len).
    let mut lo = 0usize;
    let mut hi = vals.len();
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(vals[mid])? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(vals[lo]))
}

/// Evaluate every schedule value and keep the best returned solution under
/// the max-diversity-then-lexicographic merge rule. Correct regardless of
/// whether success is monotone in gamma.
pub fn scan_best<F>(schedule: &GuessSchedule, mut attempt: F) -> Result<Option<Solution>>
where
    F: FnMut(f64) -> Result<Option<Solution>>,
{
    let mut best: Option<Solution> = None;
    for &gamma in &schedule.values {
        if let Some(sol) = attempt(gamma)? {
            keep_best(&mut best, sol);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Point};
    use crate::fixtures;

    #[test]
    fn pairwise_schedule_of_fix_b() {
        let (ds, _) = fixtures::fix_b();
        let s = pairwise_guesses(&ds).unwrap();
        assert_eq!(s.values, vec![1.0, 4.0, 5.0]);
    }

    #[test]
    fn pairwise_schedule_of_fix_tight() {
        let (ds, _) = fixtures::fix_tight();
        let s = pairwise_guesses(&ds).unwrap();
        assert_eq!(s.values, vec![0.2, 1.0]);
    }

    #[test]
    fn coincident_points_yield_an_empty_schedule_error() {
        let points = vec![
            Point { id: "a".into(), group: 0, coords: Some(vec![1.0]) },
            Point { id: "b".into(), group: 0, coords: Some(vec![1.0]) },
        ];
        let ds = Dataset::euclidean(points, 1).unwrap();
        assert!(matches!(pairwise_guesses(&ds), Err(Error::EmptySchedule(_))));
    }

    #[test]
    fn geometric_grids() {
        assert_eq!(geometric_guesses(1.0, 8.0, 1.0).unwrap().values, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(geometric_guesses(1.0, 1.0, 0.5).unwrap().values, vec![1.0]);
        assert_eq!(geometric_guesses(1.0, 5.0, 1.0).unwrap().values, vec![1.0, 2.0, 4.0, 5.0]);
    }

    #[test]
    fn largest_feasible_matches_a_linear_scan() {
        let schedule = geometric_guesses(1.0, 8.0, 1.0).unwrap();
        let got = largest_feasible(&schedule, |g| Ok(g <= 3.0)).unwrap();
        assert_eq!(got, Some(2.0));
        assert_eq!(largest_feasible(&schedule, |_| Ok(false)).unwrap(), None);

        // Cross-check binary search against a scan for every threshold.
        for threshold in [0.5, 1.0, 1.5, 2.0, 3.9, 4.0, 8.0, 9.0] {
            let fast = largest_feasible(&schedule, |g| Ok(g <= threshold)).unwrap();
            let slow = schedule.values.iter().copied().filter(|&g| g <= threshold).next_back();
            assert_eq!(fast, slow, "threshold {threshold}");
        }
    }
}
