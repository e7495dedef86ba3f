//! Property tests for the metric primitives, schedules, traversals, and the
//! weight redistribution transform.

use fairdiv::dataset::{diversity, Dataset, Point};
use fairdiv::euclidean::gmm;
use fairdiv::guessing::{geometric_guesses, largest_feasible, pairwise_guesses};
use fairdiv::lp::{redistribute_weights, FractionalSolution};
use fairdiv::streaming::tau_gmm;
use fairdiv::FairnessSpec;
use proptest::prelude::*;

fn arb_points(max_n: usize, m: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(
        (
            prop::num::f64::NORMAL.prop_map(|v| (v % 50.0).abs()),
            prop::num::f64::NORMAL.prop_map(|v| (v % 50.0).abs()),
            0..m,
        ),
        2..=max_n,
    )
    .prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (x, y, g))| Point {
                id: format!("p{i}"),
                group: g,
                coords: Some(vec![x, y]),
            })
            .collect()
    })
}

fn dataset(points: Vec<Point>, m: usize) -> Dataset {
    Dataset::euclidean(points, m).unwrap()
}

proptest! {
    #[test]
    fn distance_is_symmetric_with_zero_diagonal(points in arb_points(10, 2)) {
        let ds = dataset(points, 2);
        for i in 0..ds.n() {
            prop_assert_eq!(ds.distance(i, i), 0.0);
            for j in 0..ds.n() {
                prop_assert_eq!(ds.distance(i, j), ds.distance(j, i));
            }
        }
    }

    #[test]
    fn diversity_never_grows_as_points_are_added(points in arb_points(10, 2)) {
        let ds = dataset(points, 2);
        let mut prev = f64::INFINITY;
        let mut subset = Vec::new();
        for i in 0..ds.n() {
            subset.push(i);
            let d = diversity(&ds, &subset);
            prop_assert!(d <= prev);
            prev = d;
        }
    }

    #[test]
    fn removing_any_point_never_decreases_diversity(points in arb_points(8, 2)) {
        let ds = dataset(points, 2);
        let all: Vec<usize> = (0..ds.n()).collect();
        let base = diversity(&ds, &all);
        for skip in 0..ds.n() {
            let rest: Vec<usize> = all.iter().copied().filter(|&i| i != skip).collect();
            prop_assert!(diversity(&ds, &rest) >= base);
        }
    }

    #[test]
    fn geometric_grid_is_strictly_increasing_and_covers_the_range(
        d_lo in 1e-3..10.0f64,
        span in 1.0..50.0f64,
        eps in 0.01..2.0f64,
    ) {
        let d_hi = d_lo * span;
        let s = geometric_guesses(d_lo, d_hi, eps).unwrap();
        prop_assert_eq!(s.values[0], d_lo);
        prop_assert_eq!(*s.values.last().unwrap(), d_hi);
        for w in s.values.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn binary_search_matches_linear_scan_for_monotone_predicates(
        points in arb_points(8, 2),
        threshold in 0.0..80.0f64,
    ) {
        let ds = dataset(points, 2);
        if let Ok(schedule) = pairwise_guesses(&ds) {
            let fast = largest_feasible(&schedule, |g| Ok(g <= threshold)).unwrap();
            let slow = schedule.values.iter().copied().filter(|&g| g <= threshold).next_back();
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn tau_gmm_outputs_are_pairwise_separated(
        points in arb_points(12, 2),
        tau in 0.1..20.0f64,
        cap in 1..8usize,
    ) {
        let ds = dataset(points, 2);
        let out = tau_gmm(&ds, 0..ds.n(), tau, cap, &[]);
        prop_assert!(out.len() <= cap);
        for (a, &i) in out.iter().enumerate() {
            for &j in &out[a + 1..] {
                prop_assert!(ds.distance(i, j) >= tau);
            }
        }
    }

    #[test]
    fn gmm_radii_are_non_increasing_and_prefix_exact(points in arb_points(10, 1)) {
        let ds = dataset(points, 1);
        let idx: Vec<usize> = (0..ds.n()).collect();
        let o = gmm(&ds, &idx, ds.n(), &[]).unwrap();
        for w in o.insertion_radii.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        for len in 2..=o.order.len() {
            prop_assert_eq!(diversity(&ds, &o.order[..len]), o.prefix_diversity(len));
        }
    }

    #[test]
    fn redistribution_preserves_group_sums_and_separates_support(
        points in arb_points(10, 2),
        weights in prop::collection::vec(0.0..1.0f64, 10),
        gamma in 0.5..30.0f64,
    ) {
        let ds = dataset(points, 2);
        let spec = FairnessSpec::new(vec![1, 0]).unwrap();
        let x: Vec<f64> = (0..ds.n()).map(|i| weights[i % weights.len()]).collect();
        let support: Vec<usize> = (0..ds.n()).filter(|&i| x[i] > 0.0).collect();
        let frac = FractionalSolution { x, feasible: true, support };
        let red = redistribute_weights(&ds, &spec, gamma, &frac);
        for g in 0..ds.m() {
            let xs: f64 = ds.group_members(g).iter().map(|&i| frac.x[i]).sum();
            let ys: f64 = ds.group_members(g).iter().map(|&i| red.y[i]).sum();
            prop_assert!((xs - ys).abs() <= 1e-9 * xs.max(1.0));
        }
        for g in 0..ds.m() {
            let supp: Vec<usize> = ds
                .group_members(g)
                .iter()
                .copied()
                .filter(|&i| red.y[i] > 0.0)
                .collect();
            for (a, &i) in supp.iter().enumerate() {
                for &j in &supp[a + 1..] {
                    prop_assert!(ds.distance(i, j) >= gamma / 3.0);
                }
            }
        }
    }
}
