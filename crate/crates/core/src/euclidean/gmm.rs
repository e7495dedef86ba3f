//! Farthest-point traversal and the per-group coreset built from it.

use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};

/// Point order chosen by farthest-point traversal. `insertion_radii[t - 1]`
/// is the distance of `order[t]` to the set selected before it; the sequence
/// is non-increasing, and the diversity of a prefix equals the insertion
/// radius of its last point (see [`GmmOrdering::prefix_diversity`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GmmOrdering {
    pub order: Vec<usize>,
    /// `insertion_radii[i]` belongs to `order[i + 1]`.
    pub insertion_radii: Vec<f64>,
}

impl GmmOrdering {
    /// Diversity of the prefix `order[..len]`: infinity for len <= 1,
    /// otherwise the insertion radius of its last point.
    pub fn prefix_diversity(&self, len: usize) -> f64 {
        if len <= 1 {
            f64::INFINITY
        } else {
            self.insertion_radii[len - 2]
        }
    }
}

/// Gonzalez traversal over `points` (global indices). The seed is the lowest
/// index unless `init` is given; every later pick maximizes the distance to
/// the selected set, ties broken toward the lowest index. O(target * n) via
/// a maintained nearest-distance array.
pub fn gmm(ds: &Dataset, points: &[usize], target: usize, init: &[usize]) -> Result<GmmOrdering> {
    if points.is_empty() && init.is_empty() {
        return Err(Error::Unsupported("gmm over an empty point set".into()));
    }
    assert!(target >= 1, "gmm target must be >= 1");
    let mut pool: Vec<usize> = points.to_vec();
    pool.sort_unstable();
    pool.dedup();

    let mut order: Vec<usize> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    // Distance of each pool point to the selected set.
    let mut dist: Vec<f64> = vec![f64::INFINITY; pool.len()];
    let mut in_set: Vec<bool> = vec![false; pool.len()];

    let absorb = |p: usize, order: &mut Vec<usize>, dist: &mut Vec<f64>| {
        order.push(p);
        for (t, &q) in pool.iter().enumerate() {
            let d = ds.distance(p, q);
            if d < dist[t] {
                dist[t] = d;
            }
        }
    };

    for &p in init {
        absorb(p, &mut order, &mut dist);
    }
    if order.is_empty() {
        let seed = pool[0];
        in_set[0] = true;
        absorb(seed, &mut order, &mut dist);
    } else {
        for (t, &q) in pool.iter().enumerate() {
            if order.contains(&q) {
                in_set[t] = true;
            }
        }
    }

    while order.len() < target.max(init.len()) {
        let mut best: Option<(usize, f64)> = None;
        for t in 0..pool.len() {
            if in_set[t] {
                continue;
            }
            match best {
                Some((_, bd)) if dist[t] <= bd => {}
                _ => best = Some((t, dist[t])),
            }
        }
        let (t, radius) = match best {
            Some(b) => b,
            None => break, // pool exhausted
        };
        in_set[t] = true;
        radii.push(radius);
        absorb(pool[t], &mut order, &mut dist);
    }
    Ok(GmmOrdering { order, insertion_radii: radii })
}

/// Longest prefix whose diversity is at least `threshold` (inclusive): cut
/// where the insertion radius first drops below the threshold.
pub fn maximal_prefix(ordering: &GmmOrdering, threshold: f64) -> Vec<usize> {
    assert!(threshold > 0.0, "threshold must be positive");
    let keep = 1 + ordering
        .insertion_radii
        .iter()
        .take_while(|&&r| r >= threshold)
        .count();
    ordering.order[..keep.min(ordering.order.len())].to_vec()
}

/// Per-group size bound `ceil((4/eps')^lambda * k)` with
/// `eps' = eps / (1 + eps)`, clamped into usize range.
pub fn coreset_size_bound(eps: f64, lambda: u32, k: usize) -> usize {
    assert!(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
    assert!(lambda >= 1, "lambda must be >= 1");
    let eps_prime = eps / (1.0 + eps);
    let raw = (4.0 / eps_prime).powi(lambda as i32) * k as f64;
    if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        raw.ceil() as usize
    }
}

/// Per-group farthest-point orderings truncated to the coreset size bound.
#[derive(Debug, Clone)]
pub struct CoresetBundle {
    pub per_group: Vec<GmmOrdering>,
    pub eps: f64,
    pub lambda: u32,
    pub size_bound: usize,
}

impl CoresetBundle {
    /// All coreset point indices, ascending.
    pub fn union(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.per_group.iter().flat_map(|o| o.order.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn total_size(&self) -> usize {
        self.per_group.iter().map(|o| o.order.len()).sum()
    }
}

/// Run the traversal on each group separately, keeping orderings and radii
/// so prefixes can be extracted later per guess.
pub fn build_coreset(
    ds: &Dataset,
    spec: &FairnessSpec,
    eps: f64,
    lambda: u32,
) -> Result<CoresetBundle> {
    let bound = coreset_size_bound(eps, lambda, spec.k());
    let mut per_group = Vec::with_capacity(ds.m());
    for g in 0..ds.m() {
        let members = ds.group_members(g);
        if members.is_empty() {
            per_group.push(GmmOrdering { order: vec![], insertion_radii: vec![] });
            continue;
        }
        per_group.push(gmm(ds, members, bound.min(members.len()), &[])?);
    }
    Ok(CoresetBundle { per_group, eps, lambda, size_bound: bound })
}
