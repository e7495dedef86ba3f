//! Single-pass algorithms. Each live guess owns independent threshold-GMM
//! state; one pass over the stream fans every point out to all guesses, and
//! retained-point counters are tracked exactly so the space claims are
//! assertable in tests.

use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::euclidean::fair_euclidean_search;
use crate::guessing::geometric_guesses;
use crate::lp::{lp_pipeline, RoundingMode};
use crate::solution::{keep_best, Solution};
use rand::Rng;

/// Distance-range bounds handed to the stream algorithms: a lower bound on
/// the minimum and an upper bound on the maximum pairwise distance.
#[derive(Debug, Clone, Copy)]
pub struct StreamBounds {
    pub d_min_lb: f64,
    pub d_max_ub: f64,
}

impl StreamBounds {
    pub fn new(d_min_lb: f64, d_max_ub: f64) -> Result<Self> {
        if !(d_min_lb > 0.0 && d_max_ub >= d_min_lb) {
            return Err(Error::Unsupported(format!(
                "need 0 < d_min_lb <= d_max_ub, got ({d_min_lb}, {d_max_ub})"
            )));
        }
        Ok(Self { d_min_lb, d_max_ub })
    }
}

/// Consume-once view of a dataset in a fixed arrival order. A second pass
/// is an error; the single-pass contract is enforced, not assumed.
#[derive(Debug)]
pub struct PointStream<'a> {
    ds: &'a Dataset,
    order: Vec<usize>,
    consumed: bool,
}

impl<'a> PointStream<'a> {
    pub fn in_order(ds: &'a Dataset) -> Self {
        Self { ds, order: (0..ds.n()).collect(), consumed: false }
    }

    pub fn with_order(ds: &'a Dataset, order: Vec<usize>) -> Self {
        Self { ds, order, consumed: false }
    }

    /// Deterministically permuted arrival order.
    pub fn shuffled(ds: &'a Dataset, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..ds.n()).collect();
        let mut rng = crate::rng::substream(seed, "stream-shuffle", 0);
        order.shuffle(&mut rng);
        Self { ds, order, consumed: false }
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.ds
    }

    fn take_pass(&mut self) -> Result<std::vec::IntoIter<usize>> {
        if self.consumed {
            return Err(Error::StreamConsumed);
        }
        self.consumed = true;
        Ok(std::mem::take(&mut self.order).into_iter())
    }
}

/// Memory accounting for one run: the peak number of simultaneously
/// retained points and the final per-guess retention.
#[derive(Debug, Clone, Default)]
pub struct StreamStats {
    pub peak_memory_points: usize,
    pub per_guess_retained: Vec<usize>,
    pub guesses: usize,
}

impl StreamStats {
    fn record(&mut self, current: usize) {
        self.peak_memory_points = self.peak_memory_points.max(current);
    }
}

/// Threshold GMM over an explicit sequence: admit a point iff it is at least
/// `tau` from everything admitted so far and the cap is not yet reached.
/// With an empty `init`, the first point seeds the set (the empty minimum is
/// infinite). Output points are pairwise >= tau apart.
pub fn tau_gmm<I>(ds: &Dataset, sequence: I, tau: f64, cap: usize, init: &[usize]) -> Vec<usize>
where
    I: IntoIterator<Item = usize>,
{
    assert!(tau > 0.0, "tau must be positive");
    assert!(cap >= init.len(), "cap below the initialization set size");
    let mut set = init.to_vec();
    for p in sequence {
        if set.len() >= cap {
            break;
        }
        let min_dist = set
            .iter()
            .map(|&q| ds.distance(p, q))
            .fold(f64::INFINITY, f64::min);
        if min_dist >= tau {
            set.push(p);
        }
    }
    set
}

/// Per-group threshold-GMM state for one guess.
#[derive(Debug, Clone)]
struct PerGroupTauGmm {
    tau: f64,
    caps: Vec<usize>,
    sets: Vec<Vec<usize>>,
}

impl PerGroupTauGmm {
    fn new(tau: f64, caps: Vec<usize>) -> Self {
        let sets = caps.iter().map(|_| Vec::new()).collect();
        Self { tau, caps, sets }
    }

    /// Returns true when the point is retained.
    fn offer(&mut self, ds: &Dataset, p: usize) -> bool {
        let g = ds.group_of(p);
        if self.sets[g].len() >= self.caps[g] {
            return false;
        }
        let min_dist = self.sets[g]
            .iter()
            .map(|&q| ds.distance(p, q))
            .fold(f64::INFINITY, f64::min);
        if min_dist >= self.tau {
            self.sets[g].push(p);
            true
        } else {
            false
        }
    }

    fn retained(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }
}

/// One-guess streaming coreset: each arriving point is tested against its
/// own group's set only.
pub fn tau_gmm_stream(stream: &mut PointStream, tau: f64, caps: &[usize]) -> Result<Vec<Vec<usize>>> {
    let ds = stream.dataset();
    assert_eq!(caps.len(), ds.m(), "one cap per group");
    let mut state = PerGroupTauGmm::new(tau, caps.to_vec());
    for p in stream.take_pass()? {
        state.offer(ds, p);
    }
    Ok(state.sets)
}

/// Internal failure probability for the rounding/shift phases of the
/// streaming drivers (their signatures carry no delta of their own).
const STREAM_PHASE_DELTA: f64 = 0.1;

/// General-metric stream: per guess, keep up to `k` points per group at
/// threshold `2*gamma/5`; afterwards pool every retained point and run the
/// LP pipeline with concentrated rounding over the pool.
pub fn fair_stream_gen<R: Rng + ?Sized>(
    stream: &mut PointStream,
    spec: &FairnessSpec,
    bounds: StreamBounds,
    eps: f64,
    rng: &mut R,
) -> Result<(Solution, StreamStats)> {
    let ds = stream.dataset();
    let schedule = geometric_guesses(bounds.d_min_lb, bounds.d_max_ub, eps)?;
    let caps = vec![spec.k(); ds.m()];
    let mut states: Vec<PerGroupTauGmm> = schedule
        .values
        .iter()
        .map(|&gamma| PerGroupTauGmm::new(2.0 * gamma / 5.0, caps.clone()))
        .collect();

    let mut stats = StreamStats { guesses: schedule.values.len(), ..Default::default() };
    let mut current = 0usize;
    for p in stream.take_pass()? {
        for state in &mut states {
            if state.offer(ds, p) {
                current += 1;
                stats.record(current);
            }
        }
    }
    stats.per_guess_retained = states.iter().map(PerGroupTauGmm::retained).collect();

    let mut pooled: Vec<usize> = states
        .iter()
        .flat_map(|s| s.sets.iter().flatten().copied())
        .collect();
    pooled.sort_unstable();
    pooled.dedup();

    let sub = ds.restrict(&pooled);
    let sol = lp_pipeline(&sub, spec, eps, RoundingMode::Concentrated6, STREAM_PHASE_DELTA, rng)?;
    let mut sol = sol.into_parent(ds, &pooled);
    sol.algorithm_tag = "stream-gen".into();
    Ok((sol, stats))
}

/// Euclidean stream: per guess, threshold `eps*gamma/4` with per-group caps
/// `ceil(k * (8/eps)^lambda)`; afterwards run the grid-shift pipeline over
/// the pooled points, guessing from the pool's own pairwise distances.
pub fn fair_stream_euclidean<R: Rng + ?Sized>(
    stream: &mut PointStream,
    spec: &FairnessSpec,
    bounds: StreamBounds,
    eps: f64,
    lambda: Option<u32>,
    rng: &mut R,
) -> Result<(Solution, StreamStats)> {
    let ds = stream.dataset();
    let dims = ds.dim().ok_or(Error::ModeMismatch {
        op: "fair_stream_euclidean",
        detail: "matrix-backed dataset".into(),
    })? as u32;
    let lambda = lambda.unwrap_or(dims.max(1));
    let schedule = geometric_guesses(bounds.d_min_lb, bounds.d_max_ub, eps)?;
    let cap = ((8.0 / eps).powi(lambda as i32) * spec.k() as f64).ceil() as usize;
    let caps = vec![cap; ds.m()];
    let mut states: Vec<PerGroupTauGmm> = schedule
        .values
        .iter()
        .map(|&gamma| PerGroupTauGmm::new(eps * gamma / 4.0, caps.clone()))
        .collect();

    let mut stats = StreamStats { guesses: schedule.values.len(), ..Default::default() };
    let mut current = 0usize;
    for p in stream.take_pass()? {
        for state in &mut states {
            if state.offer(ds, p) {
                current += 1;
                stats.record(current);
            }
        }
    }
    stats.per_guess_retained = states.iter().map(PerGroupTauGmm::retained).collect();

    let mut pooled: Vec<usize> = states
        .iter()
        .flat_map(|s| s.sets.iter().flatten().copied())
        .collect();
    pooled.sort_unstable();
    pooled.dedup();

    let sub = ds.restrict(&pooled);
    let sol =
        fair_euclidean_search(&sub, spec, eps, STREAM_PHASE_DELTA, Some(lambda), rng)?;
    let mut sol = sol.into_parent(ds, &pooled);
    sol.algorithm_tag = "stream-euclidean".into();
    Ok((sol, stats))
}

/// Two-group stream: per guess, maintain a group-agnostic set `S` (cap k)
/// and per-group sets `S_1`, `S_2` (caps k_1, k_2) at threshold `gamma/2`.
/// After the pass, top up the under-represented side from its own set at
/// threshold `gamma/4` and evict the nearest over-represented neighbors of
/// the newcomers. Quotas are met exactly; diversity is `gamma/4`-grade.
pub fn fair_stream_two_groups(
    stream: &mut PointStream,
    spec: &FairnessSpec,
    bounds: StreamBounds,
    eps: f64,
) -> Result<(Solution, StreamStats)> {
    let ds = stream.dataset();
    if ds.m() != 2 || spec.m() != 2 {
        return Err(Error::Unsupported(format!(
            "fair_stream_two_groups needs exactly 2 groups, have {}",
            ds.m()
        )));
    }
    spec.check_feasible(ds)?;
    let (k1, k2) = (spec.quota(0), spec.quota(1));
    let k = spec.k();
    let schedule = geometric_guesses(bounds.d_min_lb, bounds.d_max_ub, eps)?;

    struct GuessState {
        gamma: f64,
        s: Vec<usize>,
        s1: Vec<usize>,
        s2: Vec<usize>,
    }
    let mut states: Vec<GuessState> = schedule
        .values
        .iter()
        .map(|&gamma| GuessState { gamma, s: vec![], s1: vec![], s2: vec![] })
        .collect();

    let mut stats = StreamStats { guesses: schedule.values.len(), ..Default::default() };
    let mut current = 0usize;
    for p in stream.take_pass()? {
        let g = ds.group_of(p);
        for st in &mut states {
            let tau = st.gamma / 2.0;
            let admit = |set: &Vec<usize>, cap: usize| -> bool {
                set.len() < cap
                    && set.iter().map(|&q| ds.distance(p, q)).fold(f64::INFINITY, f64::min) >= tau
            };
            if admit(&st.s, k) {
                st.s.push(p);
                current += 1;
            }
            if g == 0 && admit(&st.s1, k1) {
                st.s1.push(p);
                current += 1;
            }
            if g == 1 && admit(&st.s2, k2) {
                st.s2.push(p);
                current += 1;
            }
            stats.record(current);
        }
    }
    stats.per_guess_retained =
        states.iter().map(|st| st.s.len() + st.s1.len() + st.s2.len()).collect();

    let mut best: Option<Solution> = None;
    for st in &states {
        // Deficits decide which group gets topped up; ties pick group 1.
        let t1: Vec<usize> = st.s.iter().copied().filter(|&p| ds.group_of(p) == 0).collect();
        let t2: Vec<usize> = st.s.iter().copied().filter(|&p| ds.group_of(p) == 1).collect();
        let d1 = t1.len() as isize - k1 as isize;
        let d2 = t2.len() as isize - k2 as isize;
        let (t_u, t_o, s_u, k_u, k_o) = if d1 <= d2 {
            (&t1, &t2, &st.s1, k1, k2)
        } else {
            (&t2, &t1, &st.s2, k2, k1)
        };

        let e_u = tau_gmm(ds, s_u.iter().copied(), st.gamma / 4.0, k_u, t_u);
        if e_u.len() != k_u {
            continue;
        }
        // Nearest neighbor in the over-represented side of each newcomer.
        let mut evict: Vec<usize> = Vec::new();
        for &p in e_u.iter().filter(|p| !t_u.contains(p)) {
            let nearest = t_o.iter().copied().min_by(|&a, &b| {
                ds.distance(p, a)
                    .total_cmp(&ds.distance(p, b))
                    .then(a.cmp(&b))
            });
            if let Some(q) = nearest {
                if !evict.contains(&q) {
                    evict.push(q);
                }
            }
        }
        let keep: Vec<usize> =
            t_o.iter().copied().filter(|q| !evict.contains(q)).take(k_o).collect();
        if keep.len() != k_o {
            continue;
        }
        let mut selected = e_u;
        selected.extend(keep);
        let sol = Solution::new(ds, selected, Some(st.gamma), 1, "stream-2groups");
        keep_best(&mut best, sol);
    }
    let sol = best.ok_or_else(|| {
        Error::NoFeasibleGuess("no guess produced a quota-exact candidate".into())
    })?;
    Ok((sol, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::brute_force_opt;
    use crate::rng::substream;

    #[test]
    fn stream_is_consume_once() {
        let (ds, _) = fixtures::fix_b();
        let mut stream = PointStream::in_order(&ds);
        assert!(stream.take_pass().is_ok());
        assert!(matches!(stream.take_pass(), Err(Error::StreamConsumed)));
    }

    #[test]
    fn tau_gmm_on_fix_b() {
        let (ds, _) = fixtures::fix_b();
        assert_eq!(tau_gmm(&ds, [0, 1, 2], 2.5, 2, &[]), vec![0, 2]);
        // A threshold above every distance keeps just the seed.
        assert_eq!(tau_gmm(&ds, [0, 1, 2], 100.0, 3, &[]), vec![0]);
        // Cap zero with no init keeps nothing.
        assert_eq!(tau_gmm(&ds, [0, 1, 2], 1.0, 0, &[]), Vec::<usize>::new());
    }

    #[test]
    fn tau_gmm_outputs_are_tau_separated() {
        for seed in 0..10u64 {
            let ds = crate::synth::random_metric(&crate::synth::MetricConfig {
                n: 30,
                m: 1,
                seed,
            });
            let out = tau_gmm(&ds, 0..ds.n(), 1.4, 8, &[]);
            for (a, &i) in out.iter().enumerate() {
                for &j in &out[a + 1..] {
                    assert!(ds.distance(i, j) >= 1.4);
                }
            }
        }
    }

    #[test]
    fn tau_gmm_at_half_optimum_reaches_k() {
        // For m = 1 at tau = l*/2 the output fills k
        // and is l*/2-separated.
        for seed in 0..20u64 {
            let ds = crate::synth::random_metric(&crate::synth::MetricConfig {
                n: 16,
                m: 1,
                seed: seed + 400,
            });
            let spec = FairnessSpec::new(vec![4]).unwrap();
            let opt = brute_force_opt(&ds, &spec).unwrap();
            let out = tau_gmm(&ds, 0..ds.n(), opt.diversity / 2.0, 4, &[]);
            assert_eq!(out.len(), 4, "seed {seed}");
            assert!(crate::dataset::diversity(&ds, &out) >= opt.diversity / 2.0);
        }
    }

    #[test]
    fn per_group_stream_matches_hand_execution_on_fix_a() {
        let (ds, _) = fixtures::fix_a();
        // Stream in index order: a0(0.0) a1(4.0) a2(10.0) b0(1.0) b1(7.0).
        let mut stream = PointStream::in_order(&ds);
        let sets = tau_gmm_stream(&mut stream, 1.2, &[2, 1]).unwrap();
        assert_eq!(sets[0], vec![0, 1]); // 0.0 then 4.0; cap reached
        assert_eq!(sets[1], vec![3]); // 1.0 admitted; cap 1
    }

    #[test]
    fn per_group_streams_do_not_interact() {
        let (ds, _) = fixtures::fix_a();
        let mut stream = PointStream::in_order(&ds);
        // Group b's cap is 0: group a's admissions are unchanged.
        let sets = tau_gmm_stream(&mut stream, 1.2, &[2, 0]).unwrap();
        assert_eq!(sets[0], vec![0, 1]);
        assert!(sets[1].is_empty());
    }

    #[test]
    fn gen_stream_on_clustered_groups() {
        // Each group is a tight cluster far from the others; the rounding
        // picks one representative per cluster.
        use crate::dataset::{Dataset, Point};
        let mut points = Vec::new();
        for g in 0..3usize {
            for t in 0..4usize {
                points.push(Point {
                    id: format!("g{g}t{t}"),
                    group: g,
                    coords: Some(vec![100.0 * g as f64 + 0.001 * t as f64]),
                });
            }
        }
        let ds = Dataset::euclidean(points, 3).unwrap();
        let spec = FairnessSpec::new(vec![1, 1, 1]).unwrap();
        let bounds = StreamBounds::new(0.0005, 250.0).unwrap();
        let mut stream = PointStream::in_order(&ds);
        let mut rng = substream(3, "gen", 0);
        let (sol, stats) = fair_stream_gen(&mut stream, &spec, bounds, 0.5, &mut rng).unwrap();
        assert!(sol.group_counts.iter().all(|&c| c >= 1));
        assert!(sol.diversity >= 99.0);
        assert!(stats.peak_memory_points <= spec.k() * ds.m() * stats.guesses);
    }

    #[test]
    fn euclidean_stream_tracks_the_offline_solver_on_fix_a_2d() {
        let (ds, spec) = fixtures::fix_a_2d();
        let opt = brute_force_opt(&ds, &spec).unwrap();
        let bounds = StreamBounds::new(1.0, 10.0).unwrap();
        let mut stream = PointStream::in_order(&ds);
        let mut rng = substream(4, "euc", 0);
        let (sol, stats) =
            fair_stream_euclidean(&mut stream, &spec, bounds, 0.5, None, &mut rng).unwrap();
        assert!(sol.diversity >= opt.diversity / 1.5, "div = {}", sol.diversity);
        // Caps: ceil(k * (8/eps)^lambda) per group per guess.
        let cap = ((8.0f64 / 0.5).powi(2) * spec.k() as f64).ceil() as usize;
        for &r in &stats.per_guess_retained {
            assert!(r <= cap * ds.m());
        }
    }

    #[test]
    fn euclidean_stream_cap_arithmetic_at_lambda_one() {
        // lambda = 1, eps = 0.5: per-group cap is ceil(16 k).
        let (ds, spec) = fixtures::fix_b();
        let bounds = StreamBounds::new(1.0, 5.0).unwrap();
        let mut stream = PointStream::in_order(&ds);
        let mut rng = substream(12, "euc1", 0);
        let (_, stats) =
            fair_stream_euclidean(&mut stream, &spec, bounds, 0.5, Some(1), &mut rng).unwrap();
        let cap = (16.0 * spec.k() as f64).ceil() as usize;
        for &r in &stats.per_guess_retained {
            assert!(r <= cap * ds.m());
        }
    }

    #[test]
    fn two_group_stream_with_no_deficit_returns_s() {
        // Both quotas already satisfied by the group-agnostic set at the
        // winning guess: no swap happens.
        let (ds, spec) = fixtures::fix_a();
        let bounds = StreamBounds::new(1.0, 10.0).unwrap();
        let mut stream = PointStream::in_order(&ds);
        let (sol, _) = fair_stream_two_groups(&mut stream, &spec, bounds, 0.1).unwrap();
        assert_eq!(sol.group_counts, vec![2, 1]);
        let opt = brute_force_opt(&ds, &spec).unwrap();
        assert!(sol.diversity >= opt.diversity / (4.0 * 1.1));
    }

    #[test]
    fn two_group_stream_meets_the_factor_on_random_instances() {
        for seed in 0..30u64 {
            let ds = crate::synth::random_metric(&crate::synth::MetricConfig {
                n: 26,
                m: 2,
                seed: seed + 900,
            });
            let spec = FairnessSpec::new(vec![2, 2]).unwrap();
            let opt = brute_force_opt(&ds, &spec).unwrap();
            let bounds = StreamBounds::new(0.9, 3.1).unwrap();
            let mut stream = PointStream::shuffled(&ds, seed);
            let (sol, stats) =
                fair_stream_two_groups(&mut stream, &spec, bounds, 0.1).unwrap();
            assert_eq!(sol.group_counts, spec.quotas(), "seed {seed}");
            assert!(
                sol.diversity >= opt.diversity / (4.0 * 1.1),
                "seed {seed}: {} vs optimum {}",
                sol.diversity,
                opt.diversity
            );
            for &r in &stats.per_guess_retained {
                assert!(r <= 2 * spec.k());
            }
        }
    }

    #[test]
    fn two_group_sets_fill_completely_below_the_optimum() {
        // Ball-packing argument: at any guess gamma <= l*, the three
        // threshold sets all reach their caps, so a guess retains exactly
        // |S| + |S_1| + |S_2| = 2k points.
        for seed in 0..15u64 {
            let ds = crate::synth::random_metric(&crate::synth::MetricConfig {
                n: 22,
                m: 2,
                seed: seed + 1500,
            });
            let spec = FairnessSpec::new(vec![2, 2]).unwrap();
            let opt = brute_force_opt(&ds, &spec).unwrap();
            let bounds = StreamBounds::new(0.9, 3.1).unwrap();
            let schedule =
                crate::guessing::geometric_guesses(bounds.d_min_lb, bounds.d_max_ub, 0.1)
                    .unwrap();
            let mut stream = PointStream::in_order(&ds);
            let (_, stats) = fair_stream_two_groups(&mut stream, &spec, bounds, 0.1).unwrap();
            for (j, &gamma) in schedule.values.iter().enumerate() {
                if gamma <= opt.diversity {
                    assert_eq!(
                        stats.per_guess_retained[j],
                        2 * spec.k(),
                        "seed {seed}, gamma {gamma} <= l* {}",
                        opt.diversity
                    );
                }
            }
        }
    }

    #[test]
    fn two_group_stream_rejects_other_group_counts() {
        let ds = crate::synth::random_metric(&crate::synth::MetricConfig { n: 9, m: 3, seed: 1 });
        let spec = FairnessSpec::new(vec![1, 1, 1]).unwrap();
        let bounds = StreamBounds::new(1.0, 3.0).unwrap();
        let mut stream = PointStream::in_order(&ds);
        assert!(fair_stream_two_groups(&mut stream, &spec, bounds, 0.1).is_err());
    }
}
