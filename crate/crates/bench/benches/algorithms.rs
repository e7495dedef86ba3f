use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fairdiv::dataset::FairnessSpec;
use fairdiv::euclidean::{build_coreset, fair_line_opt, gmm};
use fairdiv::flow::fair_greedy_flow_search;
use fairdiv::lp::{build_lp, solve_feasibility};
use fairdiv::synth::{blobs, random_metric, BlobConfig, MetricConfig};

fn bench_gmm(c: &mut Criterion) {
    let mut group = c.benchmark_group("gmm");
    for n in [200usize, 1000] {
        let ds = blobs(&BlobConfig { n, m: 1, dims: 2, clusters: 5, spread: 1.0, seed: 1 });
        let idx: Vec<usize> = (0..n).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| gmm(&ds, &idx, 32, &[]).unwrap())
        });
    }
    group.finish();
}

fn bench_coreset(c: &mut Criterion) {
    let ds = blobs(&BlobConfig { n: 2000, m: 4, dims: 2, clusters: 8, spread: 1.0, seed: 2 });
    let spec = FairnessSpec::new(vec![2, 2, 2, 2]).unwrap();
    c.bench_function("build_coreset_n2000", |b| {
        b.iter(|| build_coreset(&ds, &spec, 0.5, 2).unwrap())
    });
}

fn bench_greedy_flow(c: &mut Criterion) {
    let ds = random_metric(&MetricConfig { n: 120, m: 3, seed: 3 });
    let spec = FairnessSpec::new(vec![3, 3, 3]).unwrap();
    c.bench_function("greedy_flow_search_n120", |b| {
        b.iter(|| fair_greedy_flow_search(&ds, &spec, 0.05).unwrap())
    });
}

fn bench_lp_solve(c: &mut Criterion) {
    let ds = blobs(&BlobConfig { n: 300, m: 2, dims: 2, clusters: 15, spread: 1.0, seed: 4 });
    let spec = FairnessSpec::new(vec![20, 20]).unwrap();
    let lp = build_lp(&ds, &spec, 2.0);
    c.bench_function("lp_feasibility_n300", |b| b.iter(|| solve_feasibility(&lp).unwrap()));
}

fn bench_fair_line(c: &mut Criterion) {
    let ds = blobs(&BlobConfig { n: 400, m: 3, dims: 1, clusters: 6, spread: 1.0, seed: 5 });
    let spec = FairnessSpec::new(vec![3, 3, 2]).unwrap();
    c.bench_function("fair_line_opt_n400", |b| b.iter(|| fair_line_opt(&ds, &spec).unwrap()));
}

criterion_group!(
    benches,
    bench_gmm,
    bench_coreset,
    bench_greedy_flow,
    bench_lp_solve,
    bench_fair_line
);
criterion_main!(benches);
