use crate::dataset::{diversity, Dataset};

/// A selected index set with its recomputed diversity and bookkeeping about
/// how it was produced. `diversity` is positive infinity for sets of size
/// at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Selected point indices, ascending.
    pub selected: Vec<usize>,
    pub diversity: f64,
    pub group_counts: Vec<usize>,
    pub gamma_used: Option<f64>,
    pub trials: u32,
    pub algorithm_tag: String,
}

impl Solution {
    /// Build a solution, recomputing diversity and group counts from the
    /// dataset so the stored fields can never drift from `selected`.
    pub fn new(
        ds: &Dataset,
        mut selected: Vec<usize>,
        gamma_used: Option<f64>,
        trials: u32,
        algorithm_tag: impl Into<String>,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let diversity = diversity(ds, &selected);
        let mut group_counts = vec![0usize; ds.m()];
        for &i in &selected {
            group_counts[ds.group_of(i)] += 1;
        }
        Self {
            selected,
            diversity,
            group_counts,
            gamma_used,
            trials,
            algorithm_tag: algorithm_tag.into(),
        }
    }

    /// Remap local indices through `ids` (as produced by `Dataset::restrict`)
    /// back to the parent dataset.
    pub fn into_parent(self, parent: &Dataset, ids: &[usize]) -> Self {
        let selected = self.selected.iter().map(|&t| ids[t]).collect();
        Self::new(parent, selected, self.gamma_used, self.trials, self.algorithm_tag)
    }

    /// Merge ordering: larger diversity wins, ties go to the
    /// lexicographically smaller index set.
    pub fn better_than(&self, other: &Solution) -> bool {
        if self.diversity != other.diversity {
            return self.diversity > other.diversity;
        }
        self.selected < other.selected
    }
}

/// Keep the better of two optional solutions under the merge ordering.
pub fn keep_best(best: &mut Option<Solution>, candidate: Solution) {
    match best {
        Some(b) if !candidate.better_than(b) => {}
        _ => *best = Some(candidate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn new_recomputes_diversity_and_counts() {
        let (ds, _) = fixtures::fix_a();
        let s = Solution::new(&ds, vec![2, 0, 4], Some(3.0), 1, "test");
        assert_eq!(s.selected, vec![0, 2, 4]);
        assert_eq!(s.diversity, 3.0);
        assert_eq!(s.group_counts, vec![2, 1]);
    }

    #[test]
    fn singleton_is_unbounded() {
        let (ds, _) = fixtures::fix_b();
        let s = Solution::new(&ds, vec![1], None, 1, "test");
        assert_eq!(s.diversity, f64::INFINITY);
    }

    #[test]
    fn merge_order_prefers_diversity_then_lexicographic() {
        let (ds, _) = fixtures::fix_a();
        let a = Solution::new(&ds, vec![0, 2, 4], Some(3.0), 1, "t");
        let b = Solution::new(&ds, vec![0, 3, 1], Some(3.0), 1, "t");
        assert!(b.diversity < a.diversity);
        assert!(a.better_than(&b));
        let c = Solution::new(&ds, vec![0, 1, 4], Some(3.0), 1, "t");
        assert_eq!(c.diversity, a.diversity);
        assert!(c.better_than(&a));
    }
}
