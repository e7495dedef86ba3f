//! Point sets with group labels and a metric, plus the shared primitives
//! every solver builds on: pairwise distance, set diversity, and open balls.

use crate::error::{Error, Result};

/// A single input point. `group` is a zero-based group index; `coords` is
/// present exactly when the dataset is in Euclidean mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub id: String,
    pub group: usize,
    pub coords: Option<Vec<f64>>,
}

/// Distance backing: Euclidean on coordinates, or an explicit symmetric
/// matrix stored row-major.
#[derive(Debug, Clone)]
pub enum Metric {
    Euclidean,
    Matrix(Vec<f64>),
}

/// Immutable point universe. All operations are pure reads.
#[derive(Debug, Clone)]
pub struct Dataset {
    points: Vec<Point>,
    metric: Metric,
    m: usize,
    /// Point indices per group, ascending.
    groups: Vec<Vec<usize>>,
}

impl Dataset {
    /// Build a Euclidean dataset. `m` is the group count; every point must
    /// carry coordinates of one common dimension `D >= 1` and a group in
    /// `0..m`.
    pub fn euclidean(points: Vec<Point>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDataset("group count m must be >= 1".into()));
        }
        let mut dim = None;
        for (i, p) in points.iter().enumerate() {
            let c = p.coords.as_ref().ok_or_else(|| {
                Error::InvalidDataset(format!("point {} ({}) has no coordinates", i, p.id))
            })?;
            if c.is_empty() {
                return Err(Error::InvalidDataset(format!(
                    "point {} ({}) has dimension 0",
                    i, p.id
                )));
            }
            match dim {
                None => dim = Some(c.len()),
                Some(d) if d != c.len() => {
                    return Err(Error::InvalidDataset(format!(
                        "point {} ({}) has dimension {} but earlier points have {}",
                        i,
                        p.id,
                        c.len(),
                        d
                    )))
                }
                _ => {}
            }
            if p.group >= m {
                return Err(Error::InvalidDataset(format!(
                    "point {} ({}) has group label {} outside 1..={}",
                    i,
                    p.id,
                    p.group + 1,
                    m
                )));
            }
        }
        Ok(Self::assemble(points, Metric::Euclidean, m))
    }

    /// Build a dataset over an explicit n x n distance matrix (row-major).
    /// Structural checks only; metric-axiom checks live in [`validate`].
    pub fn from_matrix(points: Vec<Point>, matrix: Vec<f64>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDataset("group count m must be >= 1".into()));
        }
        let n = points.len();
        if matrix.len() != n * n {
            return Err(Error::InvalidDataset(format!(
                "matrix has {} entries, expected {}x{}",
                matrix.len(),
                n,
                n
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.group >= m {
                return Err(Error::InvalidDataset(format!(
                    "point {} ({}) has group label {} outside 1..={}",
                    i,
                    p.id,
                    p.group + 1,
                    m
                )));
            }
        }
        Ok(Self::assemble(points, Metric::Matrix(matrix), m))
    }

    fn assemble(points: Vec<Point>, metric: Metric, m: usize) -> Self {
        let mut groups = vec![Vec::new(); m];
        for (i, p) in points.iter().enumerate() {
            groups[p.group].push(i);
        }
        Self {
            points,
            metric,
            m,
            groups,
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn group_of(&self, i: usize) -> usize {
        self.points[i].group
    }

    /// Ascending point indices of group `g`.
    pub fn group_members(&self, g: usize) -> &[usize] {
        &self.groups[g]
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.metric, Metric::Euclidean)
    }

    /// Coordinate dimension, or `None` for matrix-backed datasets.
    pub fn dim(&self) -> Option<usize> {
        match self.metric {
            Metric::Euclidean => self.points.first().and_then(|p| p.coords.as_ref()).map(Vec::len),
            Metric::Matrix(_) => None,
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Pairwise distance. Symmetric, zero on the diagonal.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let n = self.n();
        assert!(i < n && j < n, "point index out of range: ({i}, {j}) with n = {n}");
        if i == j {
            return 0.0;
        }
        match &self.metric {
            Metric::Euclidean => {
                let a = self.points[i].coords.as_ref().unwrap();
                let b = self.points[j].coords.as_ref().unwrap();
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            Metric::Matrix(m) => m[i * n + j],
        }
    }

    /// Checked variant for callers holding untrusted indices.
    pub fn try_distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.n();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
        }
        Ok(self.distance(i, j))
    }

    /// Largest pairwise distance (0 for n <= 1).
    pub fn max_distance(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                best = best.max(self.distance(i, j));
            }
        }
        best
    }

    /// Smallest strictly positive pairwise distance, if any.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let d = self.distance(i, j);
                if d > 0.0 && best.map_or(true, |b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }

    /// Owned sub-dataset over `ids` (kept in the given order). Group count
    /// and point identities are preserved; the metric is re-sliced. Local
    /// index `t` corresponds to global index `ids[t]`.
    pub fn restrict(&self, ids: &[usize]) -> Dataset {
        let points: Vec<Point> = ids.iter().map(|&i| self.points[i].clone()).collect();
        let metric = match &self.metric {
            Metric::Euclidean => Metric::Euclidean,
            Metric::Matrix(_) => {
                let s = ids.len();
                let mut sub = vec![0.0; s * s];
                for (a, &i) in ids.iter().enumerate() {
                    for (b, &j) in ids.iter().enumerate() {
                        sub[a * s + b] = self.distance(i, j);
                    }
                }
                Metric::Matrix(sub)
            }
        };
        Self::assemble(points, metric, self.m)
    }
}

/// Minimum pairwise distance of `subset`; positive infinity when the subset
/// has at most one point (no pairs to compare).
pub fn diversity(ds: &Dataset, subset: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            let d = ds.distance(i, j);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Open ball: membership is strict `d(center, q) < radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, ds: &Dataset, q: usize) -> bool {
        ds.distance(self.center, q) < self.radius
    }
}

/// All points strictly inside the open ball, the center included.
pub fn ball_members(ds: &Dataset, center: usize, radius: f64) -> Vec<usize> {
    (0..ds.n())
        .filter(|&q| ds.distance(center, q) < radius)
        .collect()
}

/// Per-group selection quotas `k_1..k_m` and their sum `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessSpec {
    quotas: Vec<usize>,
}

impl FairnessSpec {
    pub fn new(quotas: Vec<usize>) -> Result<Self> {
        if quotas.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidQuotas("total quota k must be >= 1".into()));
        }
        Ok(Self { quotas })
    }

    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    pub fn quota(&self, g: usize) -> usize {
        self.quotas[g]
    }

    pub fn m(&self) -> usize {
        self.quotas.len()
    }

    pub fn k(&self) -> usize {
        self.quotas.iter().sum()
    }

    /// Check `k_i <= |X_i|` against a dataset (and matching group counts).
    pub fn check_feasible(&self, ds: &Dataset) -> Result<()> {
        if self.quotas.len() != ds.m() {
            return Err(Error::InvalidQuotas(format!(
                "spec has {} groups, dataset has {}",
                self.quotas.len(),
                ds.m()
            )));
        }
        for g in 0..ds.m() {
            let have = ds.group_members(g).len();
            if self.quotas[g] > have {
                return Err(Error::InfeasibleQuotas {
                    group: g + 1,
                    required: self.quotas[g],
                    available: have,
                });
            }
        }
        Ok(())
    }
}

/// One failed invariant, with a witness where that is meaningful.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    QuotaExceedsGroup { group: usize, quota: usize, size: usize },
    GroupCountMismatch { spec_m: usize, dataset_m: usize },
    Asymmetry { i: usize, j: usize, dij: f64, dji: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    NegativeDistance { i: usize, j: usize, value: f64 },
    TriangleViolation { a: usize, b: usize, c: usize, direct: f64, via: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::QuotaExceedsGroup { group, quota, size } => write!(
                f,
                "quota exceeds group size: group {group} has {size} points but quota {quota}"
            ),
            Violation::GroupCountMismatch { spec_m, dataset_m } => {
                write!(f, "spec has {spec_m} groups, dataset has {dataset_m}")
            }
            Violation::Asymmetry { i, j, dij, dji } => {
                write!(f, "asymmetric metric: d({i},{j}) = {dij} but d({j},{i}) = {dji}")
            }
            Violation::NonzeroDiagonal { i, value } => {
                write!(f, "nonzero diagonal: d({i},{i}) = {value}")
            }
            Violation::NegativeDistance { i, j, value } => {
                write!(f, "negative distance: d({i},{j}) = {value}")
            }
            Violation::TriangleViolation { a, b, c, direct, via } => write!(
                f,
                "triangle violation at ({a},{b},{c}): d({a},{c}) = {direct} > d({a},{b})+d({b},{c}) = {via}"
            ),
        }
    }
}

/// Validation outcome; `triangle_checked` is false when the cubic check was
/// skipped because the dataset is too large.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub triangle_checked: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const METRIC_TOLERANCE: f64 = 1e-9;
const TRIANGLE_CHECK_MAX_N: usize = 2000;
const MAX_REPORTED_VIOLATIONS: usize = 16;

/// Metric-axiom checks for explicit matrices. The cubic triangle check runs
/// only for n <= 2000 (skipped with a warning above); the returned flag says
/// whether it ran. Euclidean datasets satisfy the axioms by construction.
pub fn metric_violations(ds: &Dataset) -> (Vec<Violation>, bool) {
    let mut violations = Vec::new();
    let n = ds.n();
    let mat = match ds.metric() {
        Metric::Matrix(mat) => mat,
        Metric::Euclidean => return (violations, true),
    };
    for i in 0..n {
        if mat[i * n + i].abs() > METRIC_TOLERANCE {
            violations.push(Violation::NonzeroDiagonal { i, value: mat[i * n + i] });
        }
        for j in (i + 1)..n {
            let dij = mat[i * n + j];
            let dji = mat[j * n + i];
            if dij < 0.0 {
                violations.push(Violation::NegativeDistance { i, j, value: dij });
            }
            if (dij - dji).abs() > METRIC_TOLERANCE {
                violations.push(Violation::Asymmetry { i, j, dij, dji });
            }
            if violations.len() >= MAX_REPORTED_VIOLATIONS {
                return (violations, false);
            }
        }
    }
    if n > TRIANGLE_CHECK_MAX_N {
        log::warn!("triangle-inequality check skipped: n = {n} > {TRIANGLE_CHECK_MAX_N}");
        return (violations, false);
    }
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let direct = mat[a * n + c];
                let via = mat[a * n + b] + mat[b * n + c];
                if direct > via + METRIC_TOLERANCE {
                    violations.push(Violation::TriangleViolation { a, b, c, direct, via });
                    if violations.len() >= MAX_REPORTED_VIOLATIONS {
                        break 'outer;
                    }
                }
            }
        }
    }
    (violations, true)
}

/// Check dataset and quota invariants; failures are reported, not raised.
pub fn validate(ds: &Dataset, spec: &FairnessSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    if spec.m() != ds.m() {
        report.violations.push(Violation::GroupCountMismatch {
            spec_m: spec.m(),
            dataset_m: ds.m(),
        });
    }
    for g in 0..spec.m().min(ds.m()) {
        let size = ds.group_members(g).len();
        if spec.quota(g) > size {
            report.violations.push(Violation::QuotaExceedsGroup {
                group: g + 1,
                quota: spec.quota(g),
                size,
            });
        }
    }
    let (metric, triangle_checked) = metric_violations(ds);
    report.violations.extend(metric);
    report.triangle_checked = triangle_checked;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn distance_is_absolute_difference_in_one_dimension() {
        let (ds, _) = fixtures::fix_b();
        // FIX-B points are 0, 1, 5.
        assert_eq!(ds.distance(0, 2), 5.0);
        assert_eq!(ds.distance(1, 2), 4.0);
        for i in 0..ds.n() {
            assert_eq!(ds.distance(i, i), 0.0);
        }
    }

    #[test]
    fn fix_tight_matches_the_stated_distances() {
        let (ds, _) = fixtures::fix_tight();
        assert_eq!(ds.distance(0, 1), 0.2);
        assert_eq!(ds.distance(1, 0), 0.2);
        assert_eq!(ds.distance(0, 2), 1.0);
        assert_eq!(ds.distance(2, 3), 1.0);
    }

    #[test]
    fn diversity_of_small_sets_is_unbounded() {
        let (ds, _) = fixtures::fix_a();
        assert_eq!(diversity(&ds, &[2]), f64::INFINITY);
        assert_eq!(diversity(&ds, &[]), f64::INFINITY);
    }

    #[test]
    fn diversity_examples() {
        let (ds, _) = fixtures::fix_a();
        // FIX-A layout: a0=0.0 a1=4.0 a2=10.0 b0=1.0 b1=7.0
        assert_eq!(diversity(&ds, &[0, 4, 2]), 3.0);
        let (tight, _) = fixtures::fix_tight();
        assert_eq!(diversity(&tight, &[0, 2, 3]), 1.0);
    }

    #[test]
    fn ball_membership_is_strict_and_contains_center() {
        let (ds, _) = fixtures::fix_b();
        assert_eq!(ball_members(&ds, 0, 1.5), vec![0, 1]);
        // Radius below the minimum positive distance: only the center.
        assert_eq!(ball_members(&ds, 0, 0.5), vec![0]);
        let (tight, _) = fixtures::fix_tight();
        assert_eq!(ball_members(&tight, 0, 1.0 / 3.0), vec![0, 1]);
    }

    #[test]
    fn validate_flags_oversized_quota() {
        let (ds, _) = fixtures::fix_a();
        let spec = FairnessSpec::new(vec![4, 1]).unwrap();
        let report = validate(&ds, &spec);
        assert!(matches!(
            report.violations[0],
            Violation::QuotaExceedsGroup { group: 1, quota: 4, size: 3 }
        ));
    }

    #[test]
    fn validate_accepts_well_formed_fixtures() {
        for (ds, spec) in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_tight()] {
            let report = validate(&ds, &spec);
            assert!(report.is_clean(), "{:?}", report.violations);
            assert!(report.triangle_checked);
        }
    }

    #[test]
    fn validate_names_a_triangle_witness() {
        let points = vec![
            Point { id: "a".into(), group: 0, coords: None },
            Point { id: "b".into(), group: 0, coords: None },
            Point { id: "c".into(), group: 0, coords: None },
        ];
        #[rustfmt::skip]
        let matrix = vec![
            0.0, 1.0, 9.0,
            1.0, 0.0, 1.0,
            9.0, 1.0, 0.0,
        ];
        let ds = Dataset::from_matrix(points, matrix, 1).unwrap();
        let spec = FairnessSpec::new(vec![1]).unwrap();
        let report = validate(&ds, &spec);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TriangleViolation { a: 0, b: 1, c: 2, .. })));
    }

    #[test]
    fn restrict_preserves_distances_and_groups() {
        let (ds, _) = fixtures::fix_tight();
        let sub = ds.restrict(&[0, 2, 3]);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.m(), 2);
        assert_eq!(sub.distance(0, 1), ds.distance(0, 2));
        assert_eq!(sub.group_of(0), 0);
        assert_eq!(sub.group_of(1), 1);
    }
}
