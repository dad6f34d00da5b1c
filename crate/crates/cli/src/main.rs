mod input;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use optnet::fillings::{self, FillingError, DEFAULT_FILLING_NMAX};
use optnet::geometry::{euclidean_mst, PlaneNetwork, VertexKind};
use optnet::graph::{kruskal_mst, GraphError, TreeTopology};
use optnet::metric::FiniteMetricSpace;
use optnet::ratios::{self, RatioError, RatioKind, RatioReport};
use optnet::repro;
use optnet::scalar::{eq_tol, Rational, Scalar};
use optnet::steiner::{self, SteinerError};
use serde_json::{json, Value};

use output::{filling_json, float_json, scalar_json, sig12, NetworkJson};

/// Minimal spanning trees, planar Steiner trees and minimal fillings.
#[derive(Parser, Debug)]
#[command(name = "optnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal spanning tree of planar points or of a weighted graph.
    Mst(MstArgs),
    /// Steiner minimal tree of planar points.
    Smt(SmtArgs),
    /// Minimal filling of a distance matrix.
    Mf(MfArgs),
    /// Parametric filling of a distance matrix on a fixed tree.
    Mpf(MpfArgs),
    /// Four-point classification, with the realizing tree when additive.
    Additive(MatrixArgs),
    /// Isometric image of a distance matrix in l-infinity.
    Embed(MatrixArgs),
    /// Spanning, Steiner and filling lengths of planar points with their ratios.
    Ratios(RatiosArgs),
    /// Randomized search for the least ratio over planar point sets.
    Search(SearchArgs),
    /// Runs the reference checks and prints a pass/fail table.
    Repro(ReproArgs),
    /// Recomputes the lengths of a network JSON document from its coordinates.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct JsonOut {
    /// Write JSON to this path (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MstInput {
    /// Points as CSV (`x,y`) or JSON.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Weighted graph: an `n=<count>` line followed by `u,v,w` lines.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MstArgs {
    #[command(flatten)]
    input: MstInput,
    #[command(flatten)]
    out: JsonOut,
    /// Write an SVG drawing (point input only).
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SmtArgs {
    #[arg(long)]
    points: PathBuf,
    /// Largest accepted number of terminals.
    #[arg(long, default_value_t = steiner::DEFAULT_NMAX, value_parser = positive)]
    nmax: usize,
    #[command(flatten)]
    out: JsonOut,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Distance matrix as CSV, with an optional header row of labels.
    #[arg(long)]
    matrix: PathBuf,
    /// Use exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    out: JsonOut,
}

#[derive(Args, Debug)]
struct MfArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Largest accepted number of points.
    #[arg(long, default_value_t = DEFAULT_FILLING_NMAX, value_parser = positive)]
    nmax: usize,
}

#[derive(Args, Debug)]
struct MpfArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Tree as JSON `{"vertices", "edges", "boundary"}`.
    #[arg(long)]
    topology: PathBuf,
    /// Allow negative edge weights.
    #[arg(long)]
    generalized: bool,
    /// Also bound the value from below by multitours up to this multiplicity.
    #[arg(long, value_parser = positive)]
    kmax: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RatiosInput {
    #[arg(long)]
    points: Option<PathBuf>,
    /// CSV of `set,x,y` rows; prints one CSV row per set.
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RatiosArgs {
    #[command(flatten)]
    input: RatiosInput,
    #[command(flatten)]
    out: JsonOut,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// One of sr, sgr, ssr.
    #[arg(long)]
    kind: RatioKind,
    #[arg(long, value_parser = at_least_two)]
    n: usize,
    #[arg(long, default_value_t = 200, value_parser = positive)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: JsonOut,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// Run a single check by number.
    #[arg(long, value_name = "ID")]
    only: Option<usize>,
    #[command(flatten)]
    out: JsonOut,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Network JSON as written by `mst` or `smt`.
    #[arg(long)]
    network: PathBuf,
}

fn bounded_below(text: &str, least: usize) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(v) if v >= least => Ok(v),
        Ok(_) => Err(format!("must be at least {least}")),
        Err(e) => Err(e.to_string()),
    }
}

fn positive(text: &str) -> Result<usize, String> {
    bounded_below(text, 1)
}

fn at_least_two(text: &str) -> Result<usize, String> {
    bounded_below(text, 2)
}

/// Relative tolerance for `verify`.
const VERIFY_REL_TOL: f64 = 1e-12;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_guard(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("OPTNET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("OPTNET_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Mst(args) => run_mst(args),
        Command::Smt(args) => run_smt(args),
        Command::Mf(args) if args.matrix.exact => run_mf::<Rational>(args),
        Command::Mf(args) => run_mf::<f64>(args),
        Command::Mpf(args) if args.matrix.exact => run_mpf::<Rational>(args),
        Command::Mpf(args) => run_mpf::<f64>(args),
        Command::Additive(args) if args.exact => run_additive::<Rational>(args),
        Command::Additive(args) => run_additive::<f64>(args),
        Command::Embed(args) if args.exact => run_embed::<Rational>(args),
        Command::Embed(args) => run_embed::<f64>(args),
        Command::Ratios(args) => run_ratios(args),
        Command::Search(args) => run_search(args),
        Command::Repro(args) => run_repro(args),
        Command::Verify(args) => run_verify(args),
    }?;
    Ok(ExitCode::SUCCESS)
}

/// Writes `value` to the `--json` target. Returns whether standard output
/// was used, in which case the text summary is suppressed.
fn emit_json(out: &JsonOut, value: &Value) -> Result<bool> {
    let Some(path) = &out.json else {
        return Ok(false);
    };
    let text = serde_json::to_string_pretty(value)? + "\n";
    if path.as_os_str() == "-" {
        io::stdout().write_all(text.as_bytes())?;
        Ok(true)
    } else {
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(false)
    }
}

fn emit_svg(path: &Option<PathBuf>, network: &PlaneNetwork) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, output::network_svg(network)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run_mst(args: MstArgs) -> Result<()> {
    if let Some(path) = &args.input.graph {
        if args.svg.is_some() {
            bail!("--svg needs point input");
        }
        let graph = input::read_graph(path)?;
        let result = kruskal_mst(&graph)?;
        let edges: Vec<Value> = result
            .tree
            .edges()
            .iter()
            .map(|e| json!({"u": e.u, "v": e.v, "weight": float_json(e.weight)}))
            .collect();
        let doc = json!({"vertices": graph.vertex_count(), "edges": edges, "length": float_json(result.weight)});
        if !emit_json(&args.out, &doc)? {
            println!("mst length {} ({} edges)", sig12(result.weight), result.tree.edges().len());
        }
        return Ok(());
    }
    let path = args.input.points.as_deref().expect("clap requires one input");
    let points = input::read_points(path)?;
    let (network, length) = euclidean_mst(&points)?;
    let doc = NetworkJson::new(&network, json!({"kind": "mst", "terminals": points.len()}));
    emit_svg(&args.svg, &network)?;
    if !emit_json(&args.out, &serde_json::to_value(doc)?)? {
        println!("mst length {} ({} points)", sig12(length), points.len());
    }
    Ok(())
}

fn run_smt(args: SmtArgs) -> Result<()> {
    let points = input::read_points(&args.points)?;
    let tree = steiner::smt(&points, args.nmax)?;
    let steiner_points = tree.network.steiner_vertices().len();
    let meta = json!({"kind": "smt", "terminals": points.len(), "steiner_points": steiner_points});
    let doc = NetworkJson::new(&tree.network, meta);
    emit_svg(&args.svg, &tree.network)?;
    if !emit_json(&args.out, &serde_json::to_value(doc)?)? {
        println!("smt length {} ({} terminals, {} Steiner points)", sig12(tree.length), points.len(), steiner_points);
    }
    Ok(())
}

/// Exact scalars print as fractions followed by their rounded value.
fn scalar_text<T: Scalar>(x: &T) -> String {
    let approx = sig12(x.to_f64_lossy());
    if T::EXACT && x.to_string() != approx {
        format!("{x} (~{approx})")
    } else {
        approx
    }
}

fn weights_text<T: Scalar>(weights: &[T]) -> String {
    weights.iter().map(scalar_text).collect::<Vec<_>>().join(", ")
}

fn run_mf<T: Scalar>(args: MfArgs) -> Result<()> {
    let space: FiniteMetricSpace<T> = input::read_matrix(&args.matrix.matrix)?;
    let filling = fillings::mf(&space, args.nmax)?;
    let additivity = space.check_four_point();
    let bound = fillings::eremin_value(&space, &filling.binary.topology, 1)?;
    let tol = T::slack(&space.max_distance(), fillings::LP_EPS);
    let certificate = (bound.exact && eq_tol(&bound.lower_bound, &filling.value, &tol)).then(|| {
        json!({
            "tour": bound.attaining.sequence(),
            "half_perimeter": scalar_json(&bound.lower_bound),
        })
    });
    let mut doc = filling_json(&filling.tree, &filling.value);
    doc["binary"] = filling_json(&filling.binary, &filling.value);
    doc["topology_index"] = json!(filling.topology_index);
    doc["additivity"] = json!(additivity.class);
    doc["certificate"] = certificate.clone().unwrap_or(Value::Null);
    if !emit_json(&args.matrix.out, &doc)? {
        println!("mf {}", scalar_text(&filling.value));
        println!("points {}, {} classification", space.len(), additivity.class);
        println!("tree {} vertices, weights {}", filling.tree.topology.vertex_count(), weights_text(&filling.tree.weights));
        if certificate.is_some() {
            println!("tour {:?} attains the value", bound.attaining.sequence());
        }
    }
    Ok(())
}

fn run_mpf<T: Scalar>(args: MpfArgs) -> Result<()> {
    let space: FiniteMetricSpace<T> = input::read_matrix(&args.matrix.matrix)?;
    let topology = input::read_topology(&args.topology, space.len())?;
    let filling = fillings::mpf(&space, &topology, args.generalized)?;
    let bound = match args.kmax {
        Some(kmax) => Some(fillings::eremin_value(&space, &topology, kmax)?),
        None => None,
    };
    let mut doc = filling_json(&filling.tree, &filling.value);
    doc["generalized"] = json!(args.generalized);
    doc["bound"] = bound.as_ref().map_or(Value::Null, |b| {
        json!({
            "lower_bound": scalar_json(&b.lower_bound),
            "multiplicity": b.attaining.multiplicity(),
            "sequence": b.attaining.sequence(),
            "mpf_minus": scalar_json(&b.mpf_minus),
            "exact": b.exact,
        })
    });
    if !emit_json(&args.matrix.out, &doc)? {
        let name = if args.generalized { "mpf-" } else { "mpf" };
        println!("{name} {}", scalar_text(&filling.value));
        println!("weights {}", weights_text(&filling.tree.weights));
        if let Some(b) = bound {
            let verdict = if b.exact { "attains" } else { "stays below" };
            println!(
                "multitour bound {} (multiplicity {}) {verdict} mpf- {}",
                scalar_text(&b.lower_bound),
                b.attaining.multiplicity(),
                scalar_text(&b.mpf_minus)
            );
        }
    }
    Ok(())
}

fn run_additive<T: Scalar>(args: MatrixArgs) -> Result<()> {
    let space: FiniteMetricSpace<T> = input::read_matrix(&args.matrix)?;
    let report = space.check_four_point();
    let tree = if report.is_additive() { Some(fillings::reconstruct_additive_tree(&space)?) } else { None };
    let doc = json!({
        "class": report.class,
        "witness": report.witness,
        "tree": tree.as_ref().map_or(Value::Null, |t| filling_json(t, &t.total_weight())),
    });
    if !emit_json(&args.out, &doc)? {
        println!("{}", report.class);
        if let Some(w) = report.witness {
            println!("witness quadruple {w:?}");
        }
        if let Some(t) = tree {
            println!("tree {} vertices, length {}", t.topology.vertex_count(), scalar_text(&t.total_weight()));
            println!("weights {}", weights_text(&t.weights));
        }
    }
    Ok(())
}

fn run_embed<T: Scalar>(args: MatrixArgs) -> Result<()> {
    let space: FiniteMetricSpace<T> = input::read_matrix(&args.matrix)?;
    let image = space.kuratowski_embed();
    let n = space.len();
    let tol = space.tolerance();
    let isometric = (0..n).all(|i| (0..n).all(|j| eq_tol(&image.linf_distance(i, j), space.d(i, j), &tol)));
    let points: Vec<Vec<Value>> = image.points.iter().map(|p| p.iter().map(scalar_json).collect()).collect();
    let doc = json!({"points": points, "isometric": isometric});
    if !emit_json(&args.out, &doc)? {
        for (i, p) in image.points.iter().enumerate() {
            println!("{i}: ({})", weights_text(p));
        }
        println!("isometric {isometric}");
    }
    if !isometric {
        bail!("the image is not isometric");
    }
    Ok(())
}

const BATCH_HEADER: [&str; 8] = ["set", "n", "mst", "smt", "mf", "sr", "sgr", "ssr"];

fn run_ratios(args: RatiosArgs) -> Result<()> {
    if let Some(path) = &args.input.points {
        let report = ratios::ratio_report(&input::read_points(path)?)?;
        if !emit_json(&args.out, &serde_json::to_value(&report)?)? {
            println!("mst {}  smt {}  mf {}", sig12(report.mst), sig12(report.smt), sig12(report.mf));
            println!("sr {}  sgr {}  ssr {}", sig12(report.sr), sig12(report.sgr), sig12(report.ssr));
        }
        return Ok(());
    }
    let path = args.input.batch.as_deref().expect("clap requires one input");
    let sets = input::read_point_batch(path)?;
    let mut reports: Vec<(String, RatioReport)> = Vec::with_capacity(sets.len());
    for (name, points) in sets {
        let report = ratios::ratio_report(&points).with_context(|| format!("set {name:?}"))?;
        reports.push((name, report));
    }
    let docs: Vec<Value> = reports.iter().map(|(name, r)| json!({"set": name, "report": r})).collect();
    if !emit_json(&args.out, &Value::Array(docs))? {
        let mut writer = csv::Writer::from_writer(io::stdout());
        writer.write_record(BATCH_HEADER)?;
        for (name, r) in &reports {
            let values = [r.mst, r.smt, r.mf, r.sr, r.sgr, r.ssr].map(sig12);
            let n = r.points.len().to_string();
            writer.write_record([name.as_str(), n.as_str()].into_iter().chain(values.iter().map(String::as_str)))?;
        }
        writer.flush()?;
    }
    Ok(())
}

fn run_search(args: SearchArgs) -> Result<()> {
    let outcome = ratios::ratio_search(args.kind, args.n, args.trials, args.seed)?;
    if !emit_json(&args.out, &serde_json::to_value(&outcome)?)? {
        println!(
            "least {} {} over {} trials (trial {}, seed {})",
            outcome.kind,
            sig12(outcome.value),
            outcome.trials,
            outcome.best_trial,
            outcome.seed
        );
        for p in &outcome.report.points {
            println!("{},{}", sig12(p.x), sig12(p.y));
        }
    }
    Ok(())
}

fn run_repro(args: ReproArgs) -> Result<()> {
    let to_stdout = args.out.json.as_deref() == Some(Path::new("-"));
    let print = |o: &repro::CheckOutcome| {
        if !to_stdout {
            println!("{o}");
        }
    };
    let outcomes = match args.only {
        Some(id) => {
            let outcome = repro::run_check(id)
                .with_context(|| format!("no check {id} (checks are numbered 1 to {})", repro::check_count()))?;
            print(&outcome);
            vec![outcome]
        }
        None => repro::run_all(print),
    };
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let docs: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail, "seconds": o.seconds}))
        .collect();
    if !emit_json(&args.out, &Value::Array(docs))? {
        println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    }
    if failed > 0 {
        bail!("{failed} check(s) failed");
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let text = fs::read_to_string(&args.network).with_context(|| format!("cannot read {}", args.network.display()))?;
    let doc: NetworkJson = serde_json::from_str(&text)
        .map_err(|e| input::parse_error(&args.network, e.line() as u64, e.column(), e.to_string()))?;
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.id != i {
            bail!("vertex ids must be 0, 1, 2, ... in order; found {} at position {i}", v.id);
        }
    }
    let terminals: Vec<usize> =
        doc.vertices.iter().filter(|v| v.kind == VertexKind::Terminal).map(|v| v.id).collect();
    let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e.u, e.v)).collect();
    TreeTopology::new_unchecked_degrees(doc.vertices.len(), edges, terminals).context("the network is not a tree")?;
    let close = |a: f64, b: f64| (a - b).abs() <= VERIFY_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for e in &doc.edges {
        let (a, b) = (&doc.vertices[e.u], &doc.vertices[e.v]);
        let length = (a.x - b.x).hypot(a.y - b.y);
        if !close(length, e.weight) {
            bail!("edge {}-{} has weight {} but length {}", e.u, e.v, e.weight, length);
        }
        total += length;
    }
    if !close(total, doc.length) {
        bail!("stated length {} differs from recomputed length {}", doc.length, total);
    }
    println!("ok: {} vertices, {} edges, length {}", doc.vertices.len(), doc.edges.len(), sig12(total));
    Ok(())
}

fn is_guard(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<SteinerError>().is_some_and(steiner_guard)
            || e.downcast_ref::<FillingError>().is_some_and(filling_guard)
            || e.downcast_ref::<RatioError>().is_some_and(ratio_guard)
            || e.downcast_ref::<GraphError>().is_some_and(graph_guard)
    })
}

fn graph_guard(e: &GraphError) -> bool {
    matches!(e, GraphError::TooLarge { .. })
}

fn steiner_guard(e: &SteinerError) -> bool {
    match e {
        SteinerError::TooManyTerminals { .. } => true,
        SteinerError::Graph(g) => graph_guard(g),
        _ => false,
    }
}

fn filling_guard(e: &FillingError) -> bool {
    match e {
        FillingError::TooManyPoints { .. } | FillingError::MultiplicityTooLarge { .. } => true,
        FillingError::Graph(g) => graph_guard(g),
        _ => false,
    }
}

fn ratio_guard(e: &RatioError) -> bool {
    match e {
        RatioError::TooManyPoints { .. } => true,
        RatioError::Steiner(s) => steiner_guard(s),
        RatioError::Filling(f) => filling_guard(f),
        RatioError::Graph(g) => graph_guard(g),
        _ => false,
    }
}
