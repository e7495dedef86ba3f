//! Small hand-checked instances shared by tests, docs, and the CLI bundle.

use crate::dataset::{Dataset, FairnessSpec, Point};

fn pt(id: &str, group: usize, coords: &[f64]) -> Point {
    Point {
        id: id.to_string(),
        group,
        coords: Some(coords.to_vec()),
    }
}

/// 1-D, two groups: a = {0, 4, 10}, b = {1, 7}; quotas (2, 1).
/// Brute force over the 6 feasible subsets gives an optimum of 3.
pub fn fix_a() -> (Dataset, FairnessSpec) {
    let points = vec![
        pt("a0", 0, &[0.0]),
        pt("a1", 0, &[4.0]),
        pt("a2", 0, &[10.0]),
        pt("b0", 1, &[1.0]),
        pt("b1", 1, &[7.0]),
    ];
    let ds = Dataset::euclidean(points, 2).unwrap();
    let spec = FairnessSpec::new(vec![2, 1]).unwrap();
    (ds, spec)
}

/// 1-D, single group {0, 1, 5}, k = 2; optimum 5.
pub fn fix_b() -> (Dataset, FairnessSpec) {
    let points = vec![pt("p0", 0, &[0.0]), pt("p1", 0, &[1.0]), pt("p2", 0, &[5.0])];
    let ds = Dataset::euclidean(points, 1).unwrap();
    let spec = FairnessSpec::new(vec![2]).unwrap();
    (ds, spec)
}

/// Four points with an explicit matrix: white = {p1}, black = {p2, p3, p4};
/// d(p1, p2) = 1/5 and every other pair at distance 1. Quotas (1, 2); the
/// optimum {p1, p3, p4} has diversity 1.
pub fn fix_tight() -> (Dataset, FairnessSpec) {
    let points = vec![
        Point { id: "p1".into(), group: 0, coords: None },
        Point { id: "p2".into(), group: 1, coords: None },
        Point { id: "p3".into(), group: 1, coords: None },
        Point { id: "p4".into(), group: 1, coords: None },
    ];
    #[rustfmt::skip]
    let matrix = vec![
        0.0, 0.2, 1.0, 1.0,
        0.2, 0.0, 1.0, 1.0,
        1.0, 1.0, 0.0, 1.0,
        1.0, 1.0, 1.0, 0.0,
    ];
    let ds = Dataset::from_matrix(points, matrix, 2).unwrap();
    let spec = FairnessSpec::new(vec![1, 2]).unwrap();
    (ds, spec)
}

/// FIX-A lifted into two dimensions (y = 0); same optimum.
pub fn fix_a_2d() -> (Dataset, FairnessSpec) {
    let points = vec![
        pt("a0", 0, &[0.0, 0.0]),
        pt("a1", 0, &[4.0, 0.0]),
        pt("a2", 0, &[10.0, 0.0]),
        pt("b0", 1, &[1.0, 0.0]),
        pt("b1", 1, &[7.0, 0.0]),
    ];
    let ds = Dataset::euclidean(points, 2).unwrap();
    let spec = FairnessSpec::new(vec![2, 1]).unwrap();
    (ds, spec)
}
