mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fairdiv::dataset::{validate, Dataset, FairnessSpec};
use fairdiv::distributed::{two_round_solve, FinalSolver, SitePartition};
use fairdiv::euclidean::{build_coreset, fair_euclidean_search, fair_line_opt};
use fairdiv::flow::{build_clusters, fair_greedy_flow_search, fair_greedy_flow_search_binary};
use fairdiv::lp::{build_lp, lp_pipeline, RoundingMode};
use fairdiv::oracle::{brute_force_opt, verify};
use fairdiv::rng::substream;
use fairdiv::streaming::{
    fair_stream_euclidean, fair_stream_gen, fair_stream_two_groups, PointStream, StreamBounds,
};
use fairdiv::synth::{blobs, random_metric, BlobConfig, MetricConfig};
use fairdiv::Solution;
use report::{fmt_f64, Report};
use std::path::PathBuf;
use std::time::Instant;

/// Fair Max-Min diversification: pick k_i points per group maximizing the
/// minimum pairwise distance.
#[derive(Parser)]
#[command(name = "fairdiv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve on a full in-memory dataset.
    Solve(SolveArgs),
    /// Single-pass streaming solvers.
    Stream(StreamArgs),
    /// Simulated two-round distributed solve over composable coresets.
    Distributed(DistributedArgs),
    /// Build a per-group coreset and report it.
    Coreset(CoresetArgs),
    /// Verify a selection against the exact optimum.
    Verify(VerifyArgs),
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Time an algorithm over repeated runs (timings go to stderr).
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Dataset file: point CSV (`id,group,x1..xD`) or explicit matrix.
    #[arg(long)]
    data: PathBuf,
    /// Input format; inferred from the extension by default.
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
    /// Per-group quotas, e.g. `g1=2,g2=1`. Every populated group needs one.
    #[arg(long)]
    k: String,
    /// Emit the dataset validation report (to stderr) before solving.
    #[arg(long)]
    validate: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Auto,
    Csv,
    Matrix,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveAlgo {
    Brute,
    Lp2,
    Lp6,
    GreedyFlow,
    Line,
    Euclidean,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    algo: SolveAlgo,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Doubling-dimension parameter; defaults to the coordinate dimension.
    #[arg(long)]
    lambda: Option<u32>,
    /// Check the answer against the brute-force optimum.
    #[arg(long)]
    verify: bool,
    /// Diversity factor for --verify (defaults per algorithm contract).
    #[arg(long)]
    alpha: Option<f64>,
    /// Fairness factor for --verify (defaults per algorithm contract).
    #[arg(long)]
    beta: Option<f64>,
    /// Write the feasibility LP rows (`GE|LE coeffs rhs`) for lp2/lp6.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
    /// Greedy-flow only: binary-search the guess grid instead of scanning.
    #[arg(long)]
    binary_search: bool,
    /// Greedy-flow only: print the winning guess's cluster trace to stderr.
    #[arg(long)]
    trace_clusters: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StreamAlgo {
    Gen,
    Euclidean,
    TwoGroups,
}

#[derive(Args)]
struct StreamArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    algo: StreamAlgo,
    /// Lower bound on the minimum pairwise distance.
    #[arg(long)]
    dmin_lb: f64,
    /// Upper bound on the maximum pairwise distance.
    #[arg(long)]
    dmax_ub: f64,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<u32>,
    /// Permute the arrival order deterministically before streaming.
    #[arg(long)]
    shuffle_seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FinalAlgo {
    Brute,
    FairEuclidean,
    Lp6,
}

#[derive(Args)]
struct DistributedArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Number of simulated sites.
    #[arg(long)]
    sites: usize,
    /// Site assignment: `round-robin`, `by-hash`, or `file:<path>` with
    /// `point-id,site` lines.
    #[arg(long, default_value = "round-robin")]
    partition: String,
    /// Coordinator-side solver for round 2.
    #[arg(long = "final", value_enum, default_value_t = FinalAlgo::Brute)]
    final_solver: FinalAlgo,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<u32>,
    /// Round-1 worker threads (sites are independent).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct CoresetArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long)]
    lambda: Option<u32>,
    /// Write the coreset points as CSV (coordinate datasets only).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated point ids forming the selection to check.
    #[arg(long)]
    ids: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Coordinate dimension for blob mode.
    #[arg(long, default_value_t = 2)]
    dims: usize,
    #[arg(long, default_value_t = 3)]
    clusters: usize,
    #[arg(long, default_value_t = 1.0)]
    spread: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit an explicit metric (shortest-path closure of a random graph)
    /// instead of Gaussian blobs.
    #[arg(long)]
    matrix_mode: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    algo: SolveAlgo,
    #[arg(long, default_value_t = 5)]
    iters: u32,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<u32>,
}

fn load_dataset(args: &DataArgs) -> Result<Dataset> {
    let text = std::fs::read_to_string(&args.data)
        .with_context(|| format!("reading {}", args.data.display()))?;
    let format = match args.format {
        Format::Auto => {
            let ext = args.data.extension().and_then(|e| e.to_str()).unwrap_or("");
            if matches!(ext, "matrix" | "mat" | "dist") {
                Format::Matrix
            } else {
                Format::Csv
            }
        }
        f => f,
    };
    let ds = match format {
        Format::Matrix => fairdiv::io::parse_matrix(&text)?,
        _ => fairdiv::io::parse_points_csv(&text)?,
    };
    Ok(ds)
}

/// Parse `g1=2,g2=1` against the dataset's groups. Every populated group
/// must get a quota; unknown labels are errors.
fn parse_quotas(spec: &str, ds: &Dataset) -> Result<FairnessSpec> {
    let mut quotas = vec![None; ds.m()];
    for part in spec.split(',') {
        let part = part.trim();
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("bad quota entry `{part}`; expected gI=N"))?;
        let label: usize = name
            .trim()
            .strip_prefix('g')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| anyhow!("bad group name `{name}`; expected g1..g{}", ds.m()))?;
        if label == 0 || label > ds.m() {
            bail!("group {name} does not exist; dataset has groups g1..g{}", ds.m());
        }
        let k: usize = value.trim().parse().with_context(|| format!("bad quota `{value}`"))?;
        quotas[label - 1] = Some(k);
    }
    for g in 0..ds.m() {
        if quotas[g].is_none() && !ds.group_members(g).is_empty() {
            bail!("missing quota for present group g{}", g + 1);
        }
    }
    Ok(FairnessSpec::new(quotas.into_iter().map(|q| q.unwrap_or(0)).collect())?)
}

fn emit_validation(ds: &Dataset, spec: &FairnessSpec) {
    let report = validate(ds, spec);
    if report.is_clean() {
        eprintln!("validation: clean (triangle_checked: {})", report.triangle_checked);
    } else {
        for v in &report.violations {
            eprintln!("validation: {v}");
        }
    }
}

fn base_report(command: &str, args: &DataArgs, ds: &Dataset, spec: &FairnessSpec) -> Report {
    let mut r = Report::new(command);
    r.push("dataset", args.data.display());
    r.push("n", ds.n());
    r.push("m", ds.m());
    let quotas: Vec<String> = spec.quotas().iter().map(usize::to_string).collect();
    r.push("quotas", quotas.join(","));
    r
}

#[allow(clippy::too_many_arguments)]
fn run_solve_algo(
    ds: &Dataset,
    spec: &FairnessSpec,
    algo: SolveAlgo,
    eps: f64,
    delta: f64,
    seed: u64,
    lambda: Option<u32>,
    binary_search: bool,
) -> Result<Solution> {
    Ok(match algo {
        SolveAlgo::Brute => brute_force_opt(ds, spec)?,
        SolveAlgo::Lp2 => {
            let mut rng = substream(seed, "lp2", 0);
            lp_pipeline(ds, spec, eps, RoundingMode::Expected2, delta, &mut rng)?
        }
        SolveAlgo::Lp6 => {
            let mut rng = substream(seed, "lp6", 0);
            lp_pipeline(ds, spec, eps, RoundingMode::Concentrated6, delta, &mut rng)?
        }
        SolveAlgo::GreedyFlow => {
            if binary_search {
                fair_greedy_flow_search_binary(ds, spec, eps)?
            } else {
                fair_greedy_flow_search(ds, spec, eps)?
            }
        }
        SolveAlgo::Line => fair_line_opt(ds, spec)?,
        SolveAlgo::Euclidean => {
            let mut rng = substream(seed, "euclidean", 0);
            fair_euclidean_search(ds, spec, eps, delta, lambda, &mut rng)?
        }
    })
}

/// Contract (alpha, beta) for --verify without explicit values; only
/// algorithms with deterministic guarantees get defaults.
fn default_verify_factors(algo: SolveAlgo, m: usize, eps: f64) -> Result<(f64, f64)> {
    Ok(match algo {
        SolveAlgo::Brute | SolveAlgo::Line => (1.0, 1.0),
        SolveAlgo::GreedyFlow => ((m as f64 + 1.0) * (1.0 + eps), 1.0),
        SolveAlgo::Lp2 | SolveAlgo::Lp6 | SolveAlgo::Euclidean => bail!(
            "this algorithm's fairness guarantee is probabilistic; pass explicit --alpha and --beta"
        ),
    })
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    if args.data.validate {
        emit_validation(&ds, &spec);
    }
    if let Some(path) = &args.dump_lp {
        if !matches!(args.algo, SolveAlgo::Lp2 | SolveAlgo::Lp6) {
            bail!("--dump-lp applies to lp2/lp6 only");
        }
        // Dump at the smallest positive pairwise guess so the row structure
        // is inspectable without solving first.
        let gamma = ds
            .min_positive_distance()
            .ok_or_else(|| anyhow!("all points coincide; nothing to dump"))?;
        std::fs::write(path, build_lp(&ds, &spec, gamma).dump())?;
    }

    let sol = run_solve_algo(
        &ds,
        &spec,
        args.algo,
        args.eps,
        args.delta,
        args.seed,
        args.lambda,
        args.binary_search,
    )?;
    if args.trace_clusters {
        if !matches!(args.algo, SolveAlgo::GreedyFlow) {
            bail!("--trace-clusters applies to greedy-flow only");
        }
        let gamma = sol.gamma_used.expect("greedy-flow sets gamma_used");
        eprint!("{}", build_clusters(&ds, &spec, gamma).trace(&ds));
    }

    let mut r = base_report("solve", &args.data, &ds, &spec);
    r.push("seed", args.seed);
    r.push("eps", fmt_f64(args.eps));
    r.push_solution(&ds, &sol);

    let mut exit = 0;
    if args.verify {
        let (alpha, beta) = match (args.alpha, args.beta) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => default_verify_factors(args.algo, ds.m(), args.eps)?,
            _ => bail!("--alpha and --beta must be given together"),
        };
        let verdict = verify(&ds, &spec, &sol, alpha, beta)?;
        r.push("verify_alpha", fmt_f64(alpha));
        r.push("verify_beta", fmt_f64(beta));
        r.push("verify_optimum", fmt_f64(verdict.optimum));
        r.push("verify_pass", verdict.pass);
        if !verdict.pass {
            exit = 1;
        }
    }
    print!("{}", r.render());
    Ok(exit)
}

fn cmd_stream(args: StreamArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    if args.data.validate {
        emit_validation(&ds, &spec);
    }
    let bounds = StreamBounds::new(args.dmin_lb, args.dmax_ub)?;
    let mut stream = match args.shuffle_seed {
        Some(s) => PointStream::shuffled(&ds, s),
        None => PointStream::in_order(&ds),
    };
    let (sol, stats) = match args.algo {
        StreamAlgo::Gen => {
            let mut rng = substream(args.seed, "stream-gen", 0);
            fair_stream_gen(&mut stream, &spec, bounds, args.eps, &mut rng)?
        }
        StreamAlgo::Euclidean => {
            let mut rng = substream(args.seed, "stream-euclidean", 0);
            fair_stream_euclidean(&mut stream, &spec, bounds, args.eps, args.lambda, &mut rng)?
        }
        StreamAlgo::TwoGroups => fair_stream_two_groups(&mut stream, &spec, bounds, args.eps)?,
    };
    let mut r = base_report("stream", &args.data, &ds, &spec);
    r.push("seed", args.seed);
    r.push("eps", fmt_f64(args.eps));
    r.push(
        "shuffle_seed",
        args.shuffle_seed.map_or("none".to_string(), |s| s.to_string()),
    );
    r.push_solution(&ds, &sol);
    r.push("guesses", stats.guesses);
    r.push("peak_memory_points", stats.peak_memory_points);
    print!("{}", r.render());
    Ok(0)
}

fn parse_partition(ds: &Dataset, sites: usize, spec: &str) -> Result<SitePartition> {
    match spec {
        "round-robin" => Ok(SitePartition::round_robin(ds, sites)),
        "by-hash" => Ok(SitePartition::by_hash(ds, sites)),
        other => {
            let path = other
                .strip_prefix("file:")
                .ok_or_else(|| anyhow!("unknown partition `{other}`"))?;
            let text = std::fs::read_to_string(path)?;
            let mut assignment = vec![Vec::new(); sites];
            let mut lookup = std::collections::HashMap::new();
            for i in 0..ds.n() {
                lookup.insert(ds.point(i).id.clone(), i);
            }
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (id, site) = line
                    .split_once(',')
                    .ok_or_else(|| anyhow!("line {}: expected `point-id,site`", lineno + 1))?;
                let idx = *lookup
                    .get(id.trim())
                    .ok_or_else(|| anyhow!("line {}: unknown point id `{id}`", lineno + 1))?;
                let s: usize = site.trim().parse()?;
                if s >= sites {
                    bail!("line {}: site {s} out of range 0..{sites}", lineno + 1);
                }
                assignment[s].push(idx);
            }
            Ok(SitePartition { sites: assignment })
        }
    }
}

fn cmd_distributed(args: DistributedArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    if args.data.validate {
        emit_validation(&ds, &spec);
    }
    let partition = parse_partition(&ds, args.sites, &args.partition)?;
    let lambda = args.lambda.unwrap_or_else(|| ds.dim().unwrap_or(1) as u32);
    let final_solver = match args.final_solver {
        FinalAlgo::Brute => FinalSolver::Brute,
        FinalAlgo::FairEuclidean => FinalSolver::FairEuclidean,
        FinalAlgo::Lp6 => FinalSolver::Lp6,
    };
    let mut rng = substream(args.seed, "distributed", 0);
    let (sol, ledger) = if args.jobs > 1 {
        run_distributed_parallel(
            &ds,
            &partition,
            &spec,
            args.eps,
            lambda,
            final_solver,
            args.delta,
            args.jobs,
            &mut rng,
        )?
    } else {
        two_round_solve(&ds, &partition, &spec, args.eps, lambda, final_solver, args.delta, &mut rng)?
    };
    // Round-1 diagnostics: per-group net radii, maxed over sites.
    let mut radii = vec![0.0f64; ds.m()];
    for (j, pts) in partition.sites.iter().enumerate() {
        let lc = fairdiv::distributed::local_coreset(&ds, j, pts, &spec, args.eps, lambda)?;
        for (g, r) in lc.group_radii(&ds, pts).iter().enumerate() {
            radii[g] = radii[g].max(*r);
        }
    }
    let mut r = base_report("distributed", &args.data, &ds, &spec);
    r.push("seed", args.seed);
    r.push("eps", fmt_f64(args.eps));
    r.push("sites", args.sites);
    r.push_solution(&ds, &sol);
    r.push("wire_point_records", ledger.point_records);
    let radii_s: Vec<String> = radii.iter().map(|v| fmt_f64(*v)).collect();
    r.push("group_net_radii", radii_s.join(","));
    print!("{}", r.render());
    Ok(0)
}

/// Round 1 in worker threads (sites are independent), then the usual
/// deterministic composition and round-2 solve.
#[allow(clippy::too_many_arguments)]
fn run_distributed_parallel<R: rand::Rng>(
    ds: &Dataset,
    partition: &SitePartition,
    spec: &FairnessSpec,
    eps: f64,
    lambda: u32,
    final_solver: FinalSolver,
    delta: f64,
    jobs: usize,
    rng: &mut R,
) -> Result<(Solution, fairdiv::distributed::WireLedger)> {
    use fairdiv::distributed::{compose, local_coreset, WireLedger};
    let site_list: Vec<(usize, &Vec<usize>)> = partition.sites.iter().enumerate().collect();
    let chunk_size = site_list.len().div_ceil(jobs).max(1);
    let locals = std::thread::scope(|scope| {
        let handles: Vec<_> = site_list
            .chunks(chunk_size)
            .map(|chunk| {
                let chunk = chunk.to_vec();
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(j, pts)| local_coreset(ds, j, pts, spec, eps, lambda))
                        .collect::<fairdiv::Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("site worker panicked"))
            .collect::<fairdiv::Result<Vec<_>>>()
    })?;
    let mut locals: Vec<_> = locals.into_iter().flatten().collect();
    locals.sort_by_key(|lc| lc.site);

    let ledger = WireLedger { point_records: locals.iter().map(|lc| lc.points().len()).sum() };
    let composed = compose(ds, &locals)?;
    let union = composed.union();
    let sub = ds.restrict(&union);
    let sol = match final_solver {
        FinalSolver::Brute => brute_force_opt(&sub, spec)?,
        FinalSolver::FairEuclidean => {
            fair_euclidean_search(&sub, spec, eps, delta, Some(lambda), rng)?
        }
        FinalSolver::Lp6 => lp_pipeline(&sub, spec, eps, RoundingMode::Concentrated6, delta, rng)?,
    };
    let mut sol = sol.into_parent(ds, &union);
    sol.algorithm_tag = format!("distributed-{}", sol.algorithm_tag);
    Ok((sol, ledger))
}

fn cmd_coreset(args: CoresetArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    let lambda = args.lambda.unwrap_or_else(|| ds.dim().unwrap_or(1) as u32);
    let bundle = build_coreset(&ds, &spec, args.eps, lambda)?;
    let union = bundle.union();
    let mut r = base_report("coreset", &args.data, &ds, &spec);
    r.push("eps", fmt_f64(args.eps));
    r.push("lambda", lambda);
    r.push("size_bound_per_group", bundle.size_bound);
    let sizes: Vec<String> = bundle.per_group.iter().map(|o| o.order.len().to_string()).collect();
    r.push("group_sizes", sizes.join(","));
    r.push("total_size", union.len());
    let ids: Vec<&str> = union.iter().map(|&i| ds.point(i).id.as_str()).collect();
    r.push("points", ids.join(","));
    if let Some(path) = &args.out {
        let sub = ds.restrict(&union);
        std::fs::write(path, fairdiv::io::write_points_csv(&sub)?)?;
    }
    print!("{}", r.render());
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    let mut lookup = std::collections::HashMap::new();
    for i in 0..ds.n() {
        lookup.insert(ds.point(i).id.clone(), i);
    }
    let selected: Vec<usize> = args
        .ids
        .split(',')
        .map(|id| {
            lookup
                .get(id.trim())
                .copied()
                .ok_or_else(|| anyhow!("unknown point id `{}`", id.trim()))
        })
        .collect::<Result<_>>()?;
    let sol = Solution::new(&ds, selected, None, 1, "external");
    let verdict = verify(&ds, &spec, &sol, args.alpha, args.beta)?;
    let mut r = base_report("verify", &args.data, &ds, &spec);
    r.push_solution(&ds, &sol);
    r.push("verify_alpha", fmt_f64(args.alpha));
    r.push("verify_beta", fmt_f64(args.beta));
    r.push("verify_optimum", fmt_f64(verdict.optimum));
    r.push("verify_diversity_ok", verdict.diversity_ok);
    r.push("verify_fairness_ok", verdict.fairness_ok);
    r.push("verify_pass", verdict.pass);
    print!("{}", r.render());
    Ok(if verdict.pass { 0 } else { 1 })
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let text = if args.matrix_mode {
        let ds = random_metric(&MetricConfig { n: args.n, m: args.m, seed: args.seed });
        fairdiv::io::write_matrix(&ds)?
    } else {
        let ds = blobs(&BlobConfig {
            n: args.n,
            m: args.m,
            dims: args.dims,
            clusters: args.clusters,
            spread: args.spread,
            seed: args.seed,
        });
        fairdiv::io::write_points_csv(&ds)?
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let ds = load_dataset(&args.data)?;
    let spec = parse_quotas(&args.data.k, &ds)?;
    let mut best = u128::MAX;
    let mut last_div = 0.0;
    for iter in 0..args.iters {
        let t = Instant::now();
        let sol = run_solve_algo(
            &ds,
            &spec,
            args.algo,
            args.eps,
            args.delta,
            args.seed,
            args.lambda,
            false,
        )?;
        let ms = t.elapsed().as_millis();
        best = best.min(ms);
        last_div = sol.diversity;
        eprintln!("iter {iter}: {ms} ms");
    }
    eprintln!("best: {best} ms");
    let mut r = base_report("bench", &args.data, &ds, &spec);
    r.push("iters", args.iters);
    r.push("diversity", fmt_f64(last_div));
    print!("{}", r.render());
    Ok(0)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let t0 = Instant::now();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Stream(args) => cmd_stream(args),
        Command::Distributed(args) => cmd_distributed(args),
        Command::Coreset(args) => cmd_coreset(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    };
    eprintln!("wall_ms: {}", t0.elapsed().as_millis());
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
