use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use sparsestream_core::carowei::{
    cw_base, cw_online_report, cw_unbounded, cw_vertex_random, CwConfig, CwError,
};
use sparsestream_core::forest::{self, ForestCounts};
use sparsestream_core::oracle::{enumerate_trees, exact_lambda, exact_params, Graph};
use sparsestream_core::stream::{
    generate_bounded_degree_graph, generate_forest, parse_stream, to_vertex_arrival, GeneratorSpec, GroundTruth,
    Order, Shape,
};
use sparsestream_core::{EstimateReport, Flag, Model, Parameter, StreamSequence, StreamUpdate};

const CSV_VERSION: &str = "# sparsestream-eval v1";

#[derive(Parser)]
#[command(name = "sparsestream", version, about = "Streaming estimators for sparse graphs and forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a stream and its ground truth.
    Gen(GenArgs),
    /// Exact parameters of a stream's final graph.
    Exact(ExactArgs),
    /// Run one estimator on a stream file and print its report.
    Estimate(EstimateArgs),
    /// Monte-Carlo sweep over generated instances, written as CSV.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeName {
    RandomTree,
    Path,
    SpiderP4,
    StarWithLeaves,
    P3Spider,
    RandomForest,
    Star,
    Caterpillar,
    LeafyTree,
    /// Random graph with bounded maximum degree (not a forest).
    Graph,
    /// Every labeled tree on `--n` vertices (eval only).
    AllTrees,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Arbitrary,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Edge,
    Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Alg {
    CwBase,
    CwOnline,
    CwUnbounded,
    CwVertex,
    #[value(name = "beta-1p")]
    Beta1p,
    #[value(name = "beta-2p")]
    Beta2p,
    #[value(name = "gamma-1p")]
    Gamma1p,
    #[value(name = "gamma-2p")]
    Gamma2p,
    #[value(name = "phi-1p")]
    Phi1p,
    #[value(name = "phi-2p")]
    Phi2p,
}

impl Alg {
    fn forest(self) -> Option<(Parameter, u8)> {
        match self {
            Alg::Beta1p => Some((Parameter::Beta, 1)),
            Alg::Beta2p => Some((Parameter::Beta, 2)),
            Alg::Gamma1p => Some((Parameter::Gamma, 1)),
            Alg::Gamma2p => Some((Parameter::Gamma, 2)),
            Alg::Phi1p => Some((Parameter::Phi, 1)),
            Alg::Phi2p => Some((Parameter::Phi, 2)),
            _ => None,
        }
    }

    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Args, Clone)]
struct ShapeArgs {
    #[arg(long, value_enum)]
    shape: ShapeName,
    #[arg(long)]
    n: Option<usize>,
    /// Shape size parameter: legs, leaves, paths, components or core size.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value = "arbitrary")]
    order: OrderArg,
    #[arg(long, value_enum, default_value = "edge")]
    model: ModelArg,
    /// Decoy insert/delete pairs per edge.
    #[arg(long, default_value_t = 0.0)]
    deletion_rate: f64,
    /// Maximum degree of `--shape graph`.
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
}

#[derive(Args, Clone)]
struct AlgArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Average-degree bound for the Caro-Wei estimators, and the target
    /// average degree of `--shape graph`. Defaults to the final graph's.
    #[arg(long)]
    avg_degree: Option<f64>,
    /// Instances of the unbounded-degree estimator: `c' log2 n`.
    #[arg(long, default_value_t = 1.0)]
    c_prime: f64,
    /// Record wall-clock time (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// Forest estimators only: use oracle counts instead of sketches.
    #[arg(long)]
    exact_counts: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    avg_degree: Option<f64>,
    /// Stream path; the truth goes to `<out>.truth.json`. Without it the
    /// stream goes to stdout and the truth to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    alg: AlgArgs,
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    alg: AlgArgs,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Abort(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Abort(_) => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(input),
    }
}

/// An instance to estimate on: the stream plus what the oracle knows.
struct Instance {
    stream: StreamSequence,
    truth: Option<GroundTruth>,
    lambda: f64,
}

fn graph_truth_json(stream: &StreamSequence) -> Result<serde_json::Value, CliError> {
    let g = Graph::new(stream.n(), &stream.final_edges()).map_err(input)?;
    if g.is_forest() {
        return Ok(exact_params(&g).map_err(input)?.to_json());
    }
    let lambda = exact_lambda(&g);
    Ok(json!({
        "n": g.n(),
        "m": g.edge_count(),
        "lambda": lambda.to_string(),
        "lambda_approx": num_traits::ToPrimitive::to_f64(&lambda),
        "avg_degree": format!("{}/{}", 2 * g.edge_count(), g.n()),
        "max_degree": g.max_degree(),
    }))
}

fn instance_of(stream: StreamSequence) -> Result<Instance, CliError> {
    let g = Graph::new(stream.n(), &stream.final_edges()).map_err(input)?;
    let truth = if g.is_forest() { Some(exact_params(&g).map_err(input)?) } else { None };
    let lambda = num_traits::ToPrimitive::to_f64(&exact_lambda(&g)).unwrap_or(f64::NAN);
    Ok(Instance { stream, truth, lambda })
}

fn required(v: Option<usize>, flag: &str, shape: ShapeName) -> Result<usize, CliError> {
    v.ok_or_else(|| input(format!("--{flag} is required for shape {shape:?}")))
}

fn shape_of(a: &ShapeArgs) -> Result<Shape, CliError> {
    let r = |flag| required(a.r, flag, a.shape);
    Ok(match a.shape {
        ShapeName::RandomTree => Shape::UniformRandomTree,
        ShapeName::Path => Shape::PathBundle { paths: a.r.unwrap_or(1) },
        ShapeName::SpiderP4 => Shape::SpiderP4 { legs: r("r")? },
        ShapeName::StarWithLeaves => Shape::StarWithLeaves { r: r("r")? },
        ShapeName::P3Spider => Shape::P3Spider { legs: r("r")? },
        ShapeName::RandomForest => Shape::RandomForest { components: r("r")? },
        ShapeName::Star => Shape::Star { leaves: r("r")? },
        ShapeName::Caterpillar => Shape::Caterpillar { spine: r("r")? },
        ShapeName::LeafyTree => Shape::LeafyTree { core: r("r")? },
        ShapeName::Graph | ShapeName::AllTrees => unreachable!("handled by the caller"),
    })
}

fn order_of(o: OrderArg) -> Order {
    match o {
        OrderArg::Arbitrary => Order::Arbitrary,
        OrderArg::Random => Order::Random,
    }
}

/// Generates one instance; `all-trees` is rejected here.
fn generate(a: &ShapeArgs, avg_degree: Option<f64>, seed: u64) -> Result<Instance, CliError> {
    if !(0.0..=1e6).contains(&a.deletion_rate) {
        return Err(input("--deletion-rate must be a non-negative number"));
    }
    match a.shape {
        ShapeName::AllTrees => Err(input("shape all-trees is only available to eval")),
        ShapeName::Graph => {
            let n = required(a.n, "n", a.shape)?;
            if a.deletion_rate > 0.0 {
                return Err(input("shape graph is insertion-only"));
            }
            let avg = avg_degree.unwrap_or(2.0);
            if !(avg >= 0.0 && avg.is_finite()) {
                return Err(input("--avg-degree must be a non-negative number"));
            }
            let m = (avg * n as f64 / 2.0).round() as usize;
            let mut s = generate_bounded_degree_graph(n, m, a.max_degree, seed).map_err(input)?;
            if a.model == ModelArg::Vertex {
                s = to_vertex_arrival(&s, order_of(a.order), seed).map_err(input)?;
            }
            instance_of(s)
        }
        _ => {
            let spec = GeneratorSpec::new(shape_of(a)?, a.n, seed)
                .order(order_of(a.order))
                .model(match a.model {
                    ModelArg::Edge => Model::EdgeArrival,
                    ModelArg::Vertex => Model::VertexArrival,
                })
                .deletion_rate(a.deletion_rate);
            let (stream, truth) = generate_forest(&spec).map_err(input)?;
            let lambda = truth.lambda_f64();
            Ok(Instance {
                stream,
                truth: Some(truth),
                lambda,
            })
        }
    }
}

fn check_alg_args(a: &AlgArgs) -> Result<(), CliError> {
    for (name, x) in [("--eps", a.eps), ("--delta", a.delta)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(input(format!("{name} = {x} must lie in (0, 1)")));
        }
    }
    if a.exact_counts && a.alg.forest().is_none() {
        return Err(input("--exact-counts applies to forest estimators only"));
    }
    Ok(())
}

fn cw_error(e: CwError) -> CliError {
    match e {
        CwError::AllInstancesAborted { .. } | CwError::CounterOverflowAbort { .. } => CliError::Abort(e.to_string()),
        CwError::IncompatibleModel { .. } => CliError::Input(format!("IncompatibleStreamModel: {e}")),
        _ => input(e),
    }
}

fn run(a: &AlgArgs, inst: &Instance, seed: u64) -> Result<EstimateReport, CliError> {
    let s = &inst.stream;
    let start = Instant::now();
    let mut report = match a.alg.forest() {
        Some((p, passes)) => {
            if a.exact_counts {
                let t = inst.truth.as_ref().ok_or_else(|| input("--exact-counts needs a forest"))?;
                forest::report_from_counts(p, passes, &ForestCounts::exact(t), a.eps, a.delta, seed).map_err(input)?
            } else {
                forest::estimate(s, p, passes, a.eps, a.delta, seed).map_err(input)?
            }
        }
        None => {
            let n = s.n();
            let avg = a
                .avg_degree
                .unwrap_or_else(|| 2.0 * s.final_edges().len() as f64 / n.max(1) as f64);
            let cfg = CwConfig::new(a.eps, avg, seed).map_err(cw_error)?;
            match a.alg {
                Alg::CwBase => cw_base(s, &cfg).map_err(cw_error)?.to_report(&cfg, n, a.delta, 1),
                Alg::CwOnline => cw_online_report(s, a.eps, a.delta, seed).map_err(cw_error)?,
                Alg::CwUnbounded => cw_unbounded(s, &cfg, a.c_prime).map_err(cw_error)?.to_report(&cfg, n, a.delta, 1),
                Alg::CwVertex => cw_vertex_random(s, &cfg).map_err(cw_error)?.to_report(&cfg, n, a.delta, 1),
                _ => unreachable!("forest algorithms handled above"),
            }
        }
    };
    if a.timing {
        report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn truth_for(alg: Alg, inst: &Instance) -> Result<f64, CliError> {
    match alg.forest() {
        None => Ok(inst.lambda),
        Some((p, _)) => {
            let t = inst
                .truth
                .as_ref()
                .ok_or_else(|| input(format!("{} needs a forest", alg.name())))?;
            Ok(match p {
                Parameter::Beta => t.beta,
                Parameter::Gamma => t.gamma,
                _ => t.phi,
            } as f64)
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let inst = generate(&a.shape, a.avg_degree, a.seed)?;
    let truth = match &inst.truth {
        Some(t) => t.to_json(),
        None => graph_truth_json(&inst.stream)?,
    };
    let text = inst.stream.to_text();
    match a.out {
        Some(p) => {
            emit(Some(&p), &text)?;
            let mut tp = p.into_os_string();
            tp.push(".truth.json");
            emit(Some(Path::new(&tp)), &format!("{truth}\n"))
        }
        None => {
            emit(None, &text)?;
            eprintln!("{truth}");
            Ok(())
        }
    }
}

fn read_stream(p: &Path) -> Result<StreamSequence, CliError> {
    let bytes = fs::read(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
    parse_stream(&bytes).map_err(input)
}

fn cmd_exact(a: ExactArgs) -> Result<(), CliError> {
    let s = read_stream(&a.stream)?;
    emit(a.out.as_deref(), &format!("{}\n", graph_truth_json(&s)?))
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), CliError> {
    check_alg_args(&a.alg)?;
    let stream = read_stream(&a.stream)?;
    let inst = if a.alg.exact_counts {
        instance_of(stream)?
    } else {
        Instance {
            stream,
            truth: None,
            lambda: f64::NAN,
        }
    };
    let report = run(&a.alg, &inst, a.alg.seed)?;
    emit(a.out.as_deref(), &format!("{}\n", report.to_json()))?;
    if report.has_flag(Flag::Degraded) {
        return Err(CliError::Abort("degraded report".into()));
    }
    Ok(())
}

struct Row {
    seed: u64,
    n: usize,
    truth: f64,
    report: Option<EstimateReport>,
    abort: Option<String>,
}

fn flag_names(flags: &[Flag]) -> String {
    flags
        .iter()
        .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
        .collect::<Vec<_>>()
        .join("|")
}

fn opt_ms(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_default()
}

fn cmd_eval(a: EvalArgs) -> Result<(), CliError> {
    check_alg_args(&a.alg)?;
    if a.trials == 0 {
        return Err(input("--trials must be at least 1"));
    }
    let start = Instant::now();
    let jobs: Vec<(u64, Instance)> = if a.shape.shape == ShapeName::AllTrees {
        let n = required(a.shape.n, "n", ShapeName::AllTrees)?;
        enumerate_trees(n)
            .map_err(input)?
            .map(|g| {
                let updates = g.edges().map(|(u, v)| StreamUpdate::EdgeInsert { u, v }).collect();
                let stream = StreamSequence::new(n, Model::EdgeArrival, updates).map_err(input)?;
                let truth = exact_params(&g).map_err(input)?;
                let lambda = truth.lambda_f64();
                Ok((a.alg.seed, Instance { stream, truth: Some(truth), lambda }))
            })
            .collect::<Result<_, CliError>>()?
    } else {
        Vec::new()
    };
    let trials = if jobs.is_empty() { a.trials } else { jobs.len() };
    if trials < 30 {
        eprintln!("warning: {trials} trials are too few for a statistical claim");
    }

    let one = |i: usize, pre: Option<&(u64, Instance)>| -> Result<Row, CliError> {
        let owned;
        let (seed, inst) = match pre {
            Some((s, inst)) => (*s, inst),
            None => {
                let seed = a.alg.seed.wrapping_add(i as u64);
                owned = generate(&a.shape, a.alg.avg_degree, seed)?;
                (seed, &owned)
            }
        };
        let truth = truth_for(a.alg.alg, inst)?;
        let (report, abort) = match run(&a.alg, inst, seed) {
            Ok(r) => (Some(r), None),
            Err(CliError::Abort(m)) => (None, Some(m)),
            Err(e) => return Err(e),
        };
        Ok(Row {
            seed,
            n: inst.stream.n(),
            truth,
            report,
            abort,
        })
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = std::env::var("SPARSESTREAM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        pool = pool.num_threads(t.max(1));
    }
    let pool = pool.build().map_err(input)?;
    let rows: Vec<Row> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| one(i, jobs.get(i)))
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let mut csv = String::new();
    csv.push_str(&format!(
        "{CSV_VERSION} alg={} eps={} delta={} seed={} trials={trials}\n",
        a.alg.alg.name(),
        a.alg.eps,
        a.alg.delta,
        a.alg.seed
    ));
    csv.push_str("trial,seed,n,truth,point,lower,upper,ratio,success,flags,space_bytes,wall_ms\n");
    let (mut successes, mut ratio_sum, mut ratio_max, mut finite, mut peak) = (0usize, 0.0, 0.0f64, 0usize, 0usize);
    for (i, row) in rows.iter().enumerate() {
        match &row.report {
            Some(r) => {
                let ratio = r.ratio(row.truth);
                let ok = r.accepts(row.truth);
                successes += usize::from(ok);
                if ratio.is_finite() {
                    ratio_sum += ratio;
                    ratio_max = ratio_max.max(ratio);
                    finite += 1;
                }
                peak = peak.max(r.space_bytes);
                csv.push_str(&format!(
                    "{i},{},{},{},{},{},{},{},{},{},{},{}\n",
                    row.seed,
                    row.n,
                    row.truth,
                    r.point,
                    r.lower,
                    r.upper,
                    ratio,
                    ok,
                    flag_names(&r.flags),
                    r.space_bytes,
                    opt_ms(r.wall_ms)
                ));
            }
            None => csv.push_str(&format!(
                "{i},{},{},{},,,,,false,abort:{},,\n",
                row.seed,
                row.n,
                row.truth,
                row.abort.as_deref().unwrap_or("").replace(',', ";")
            )),
        }
    }
    let mean = if finite > 0 { ratio_sum / finite as f64 } else { f64::NAN };
    csv.push_str("summary,success_rate,mean_ratio,max_ratio,wall_ms,peak_space_bytes\n");
    csv.push_str(&format!(
        "summary,{},{},{},{},{}\n",
        successes as f64 / trials as f64,
        mean,
        ratio_max,
        opt_ms(a.alg.timing.then(|| start.elapsed().as_secs_f64() * 1e3)),
        peak
    ));
    emit(a.out.as_deref(), &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(m) => eprintln!("error: {m}"),
                CliError::Abort(m) => eprintln!("abort: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
