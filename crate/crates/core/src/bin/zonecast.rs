use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zonecast::coding::verify_round_trip;
use zonecast::dot::to_dot;
use zonecast::error::CodingError;
use zonecast::experiments::{
    field_for, run_grid, run_stress, GridReport, GridSpec, ModelKind, StressSpec, TimingMode, TrialOptions,
};
use zonecast::gf::FieldSpec;
use zonecast::graph::{DirectedMultigraph, GraphFile, NodeId};
use zonecast::online::{check_invariants, online_construct_with, ExpansionOrder, OnlineResult};
use zonecast::topology::{derive_seed, fixture, sample_session, SessionSpec, FIXTURE_NAMES};

const EXIT_INPUT: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_RANK: u8 = 3;

#[derive(Parser)]
#[command(name = "zonecast", version, about = "Online multicast zone construction and source coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the zone-labeled multicast subgraph for one session.
    Construct(ConstructArgs),
    /// Check a stored construction: invariants, ranks and a decode round.
    Verify(VerifyArgs),
    /// Sweep a random-topology grid and write one .dat per density cell.
    Grid(GridArgs),
    /// Sparse Watts-Strogatz stress run.
    Stress(StressArgs),
    /// Write a built-in example graph as JSON.
    Fixture(FixtureArgs),
    /// Sample a random topology and session as graph JSON.
    Generate(GenerateArgs),
    /// Render a graph, optionally with zone colors, as Graphviz DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "fixture")]
    graph: Option<PathBuf>,
    /// Built-in example graph (fig1, fig4, fig5).
    #[arg(long)]
    fixture: Option<String>,
    /// Source node; overrides the one in the graph file.
    #[arg(long)]
    source: Option<usize>,
    /// Comma-separated receivers; override the graph file.
    #[arg(long, value_delimiter = ',')]
    receivers: Option<Vec<usize>>,
}

/// Random graph source for `construct`, as an alternative to --graph or --fixture.
#[derive(Args)]
struct ModelArgs {
    #[arg(long, conflicts_with_all = ["graph", "fixture"], requires_all = ["n", "edge_density"])]
    model: Option<ModelKind>,
    #[arg(long, requires = "model")]
    n: Option<usize>,
    /// Link density; for ws, mapped to the nearest even mean degree.
    #[arg(long, requires = "model")]
    edge_density: Option<f64>,
    #[arg(long, default_value_t = 0.25)]
    receiver_density: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "edge-order", value_parser = parse_order)]
    order: ExpansionOrder,
    /// Result JSON destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the labeled graph as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Result JSON produced by `construct`.
    #[arg(long)]
    result: PathBuf,
    /// Field for the source code; the smallest that fits when absent.
    #[arg(long)]
    field: Option<FieldSpec>,
    /// Seed for the random symbol blocks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    blocks: usize,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "wall")]
    timing: TimingMode,
    #[arg(long, default_value = "edge-order", value_parser = parse_order)]
    order: ExpansionOrder,
    /// Output directory for .dat tables, the JSON summary and witnesses.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "er")]
    model: ModelKind,
    /// Start from the full sweep instead of the desk-scale grid.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    n_step: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    edge_densities: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    receiver_densities: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Watts-Strogatz rewiring probability.
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct StressArgs {
    /// n = 800..900; losses are reported, not fatal.
    #[arg(long)]
    long: bool,
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct FixtureArgs {
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "er")]
    model: ModelKind,
    #[arg(long)]
    n: usize,
    /// Link density; for ws, mapped to the nearest even mean degree.
    #[arg(long)]
    edge_density: f64,
    #[arg(long, default_value_t = 0.25)]
    receiver_density: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Construction result whose zones color the arcs.
    #[arg(long)]
    result: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_order(s: &str) -> Result<ExpansionOrder, String> {
    match s {
        "uncolored-first" => Ok(ExpansionOrder::UncoloredFirst),
        "edge-order" => Ok(ExpansionOrder::EdgeOrder),
        other => Err(format!("unknown order {other:?}, expected uncolored-first or edge-order")),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn invariant(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INVARIANT,
            message: message.to_string(),
        }
    }

    fn rank(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_RANK,
            message: message.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Grid(a) => grid(a),
        Command::Stress(a) => stress(a),
        Command::Fixture(a) => write_fixture(a),
        Command::Generate(a) => generate(a),
        Command::ExportDot(a) => export_dot(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

struct Instance {
    graph: DirectedMultigraph,
    source: NodeId,
    receivers: Vec<NodeId>,
}

fn load_graph(input: &InputArgs) -> Result<(DirectedMultigraph, Option<NodeId>, Option<Vec<NodeId>>), Failure> {
    let (graph, source, receivers) = match (&input.graph, &input.fixture) {
        (Some(path), _) => {
            let file = GraphFile::from_json(&read_text(path)?).map_err(Failure::input)?;
            let graph = file.to_graph().map_err(Failure::input)?;
            let (s, r) = file.session();
            (graph, s, r)
        }
        (None, Some(name)) => {
            let f = fixture(name)
                .ok_or_else(|| Failure::input(format!("unknown fixture {name:?}, expected one of {FIXTURE_NAMES:?}")))?;
            (f.graph, Some(f.source), Some(f.receivers))
        }
        (None, None) => return Err(Failure::input("one of --graph or --fixture is required")),
    };
    let source = input.source.map(NodeId).or(source);
    let receivers = input
        .receivers
        .as_ref()
        .map(|rs| rs.iter().copied().map(NodeId).collect())
        .or(receivers);
    Ok((graph, source, receivers))
}

fn load_instance(input: &InputArgs) -> Result<Instance, Failure> {
    let (graph, source, receivers) = load_graph(input)?;
    let source = source.ok_or_else(|| Failure::input("no source given"))?;
    let receivers = receivers.ok_or_else(|| Failure::input("no receivers given"))?;
    Ok(Instance {
        graph,
        source,
        receivers,
    })
}

fn construct(a: ConstructArgs) -> CliResult {
    let inst = match (a.model.model, a.model.n, a.model.edge_density) {
        (Some(model), Some(n), Some(ed)) => {
            let file = sample_graph(model, n, ed, a.model.receiver_density, a.model.beta, a.model.seed)?;
            let (source, receivers) = file.session();
            let mut input = a.input;
            input.source = input.source.or(source.map(|s| s.0));
            input.receivers = input
                .receivers
                .or(receivers.map(|rs| rs.into_iter().map(|r| r.0).collect()));
            Instance {
                graph: file.to_graph().map_err(Failure::input)?,
                source: NodeId(input.source.unwrap_or_default()),
                receivers: input.receivers.unwrap_or_default().into_iter().map(NodeId).collect(),
            }
        }
        _ => load_instance(&a.input)?,
    };
    let result = online_construct_with(&inst.graph, inst.source, &inst.receivers, a.order).map_err(Failure::input)?;
    let violations = check_invariants(&inst.graph, inst.source, &inst.receivers, &result);
    if let Some(dot_path) = &a.dot {
        let dot = to_dot(&inst.graph, Some(&result.labeling), inst.source, &inst.receivers);
        emit(&dot, Some(dot_path))?;
    }
    emit(&format!("{}\n", result.to_json()), a.out.as_deref())?;
    eprintln!(
        "K={} zones={} k={:?} inherited={}",
        result.group_k(),
        result.zone_count,
        result.k_vector(),
        result.inherited_path_count()
    );
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Err(Failure::invariant(format!("{} invariant violations", violations.len())));
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> CliResult {
    let (graph, source, receivers) = load_graph(&a.input)?;
    let result = OnlineResult::from_json(&read_text(&a.result)?).map_err(Failure::input)?;
    if result.labeling.edge_count() != graph.edge_count() {
        return Err(Failure::input(format!(
            "result covers {} edges but the graph has {}",
            result.labeling.edge_count(),
            graph.edge_count()
        )));
    }
    let source = source.unwrap_or(result.source);
    let receivers = receivers.unwrap_or_else(|| result.receiver_ids());

    let violations = check_invariants(&graph, source, &receivers, &result);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Err(Failure::invariant(format!("{} invariant violations", violations.len())));
    }

    let field = a.field.unwrap_or_else(|| field_for(result.zone_count));
    let report = verify_round_trip(&graph, &result, field, a.seed, a.blocks).map_err(|e| match e {
        CodingError::FieldTooSmall { .. } => Failure::input(e),
        CodingError::MixedPath { .. } | CodingError::UncoloredEdge { .. } => Failure::invariant(e),
        CodingError::NoFeasibleCode => Failure::rank("no feasible code: K = 0"),
        _ => Failure::rank(e),
    })?;
    emit(
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")),
        None,
    )
}

fn options(run: &RunArgs) -> TrialOptions {
    TrialOptions {
        order: run.order,
        ..TrialOptions::default()
    }
}

fn summarize(report: &GridReport, out: &Path) {
    for cell in &report.cells {
        println!("{}", out.join(&cell.file).display());
        for r in &cell.table.rows {
            println!(
                "  n={:<4} K_ek={:<8.3} K_online={:<8.3} ratio={:<8.4} zones={:<8.2} loss={}",
                r.n, r.mean_k_ek, r.mean_k_online, r.mean_runtime_ratio, r.mean_zone_count, r.loss_trials
            );
        }
    }
    println!(
        "trials={} loss_trials={} failures={}",
        report.trials.len(),
        report.loss_trials(),
        report.failures.len()
    );
    for f in report.findings.iter().chain(&report.failures) {
        println!(
            "  {:?} {} n={} trial={}: {}{}",
            f.kind,
            f.cell,
            f.n,
            f.trial,
            f.problem,
            f.witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default()
        );
    }
}

fn grid(a: GridArgs) -> CliResult {
    let mut spec = if a.full {
        GridSpec::full(a.model, a.run.seed)
    } else {
        GridSpec::desk(a.model, a.run.seed)
    };
    if a.n_min.is_some() || a.n_max.is_some() || a.n_step.is_some() {
        let lo = a.n_min.unwrap_or(spec.n_values[0]);
        let hi = a.n_max.unwrap_or(*spec.n_values.last().expect("nonempty"));
        let step = a.n_step.unwrap_or(10);
        if step == 0 || lo > hi {
            return Err(Failure::input("node range needs n-min <= n-max and a positive step"));
        }
        spec.n_values = (lo..=hi).step_by(step).collect();
    }
    if let Some(d) = a.edge_densities {
        spec.edge_densities = d;
    }
    if let Some(d) = a.receiver_densities {
        spec.receiver_densities = d;
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if let Some(b) = a.beta {
        spec.beta = b;
    }
    spec.timing = a.run.timing;
    spec.options = options(&a.run);
    spec.jobs = a.run.jobs;

    let report = run_grid(&spec, Some(&a.run.out)).map_err(Failure::input)?;
    summarize(&report, &a.run.out);
    if !report.passed() {
        return Err(Failure::invariant(format!("{} failing trials", report.failures.len())));
    }
    Ok(())
}

fn stress(a: StressArgs) -> CliResult {
    let mut spec = if a.long {
        StressSpec::long(a.run.seed)
    } else {
        StressSpec::short(a.run.seed)
    };
    if let Some(ns) = a.n_values {
        spec.n_values = ns;
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    spec.timing = a.run.timing;
    spec.options = options(&a.run);
    spec.jobs = a.run.jobs;

    let report = run_stress(&spec, Some(&a.run.out)).map_err(Failure::input)?;
    summarize(&report, &a.run.out);
    let fatal = report
        .failures
        .iter()
        .filter(|f| !a.long || f.kind.is_structural())
        .count();
    if fatal > 0 {
        return Err(Failure::invariant(format!("{fatal} failing trials")));
    }
    Ok(())
}

fn write_fixture(a: FixtureArgs) -> CliResult {
    let f = fixture(&a.name)
        .ok_or_else(|| Failure::input(format!("unknown fixture {:?}, expected one of {FIXTURE_NAMES:?}", a.name)))?;
    let file = GraphFile::from_graph(&f.graph, Some(f.source), Some(&f.receivers));
    emit(&format!("{}\n", file.to_json()), a.out.as_deref())
}

fn sample_graph(
    model: ModelKind,
    n: usize,
    edge_density: f64,
    receiver_density: f64,
    beta: f64,
    seed: u64,
) -> Result<GraphFile, Failure> {
    let topology = model.topology(n, edge_density, beta, derive_seed(seed, &[0]));
    let session = SessionSpec {
        receiver_density,
        seed: derive_seed(seed, &[1]),
    };
    let graph = topology.generate().map_err(Failure::input)?;
    let sess = sample_session(&graph, &session).map_err(Failure::input)?;
    Ok(GraphFile::from_graph(&graph, Some(sess.source), Some(&sess.receivers)))
}

fn generate(a: GenerateArgs) -> CliResult {
    let file = sample_graph(a.model, a.n, a.edge_density, a.receiver_density, a.beta, a.seed)?;
    emit(&format!("{}\n", file.to_json()), a.out.as_deref())
}

fn export_dot(a: ExportDotArgs) -> CliResult {
    let (graph, source, receivers) = load_graph(&a.input)?;
    let result = match &a.result {
        Some(path) => Some(OnlineResult::from_json(&read_text(path)?).map_err(Failure::input)?),
        None => None,
    };
    if let Some(r) = &result {
        if r.labeling.edge_count() != graph.edge_count() {
            return Err(Failure::input("result and graph disagree on the edge count"));
        }
    }
    let source = source
        .or(result.as_ref().map(|r| r.source))
        .ok_or_else(|| Failure::input("no source given"))?;
    let receivers = receivers
        .or(result.as_ref().map(|r| r.receiver_ids()))
        .unwrap_or_default();
    let dot = to_dot(&graph, result.as_ref().map(|r| &r.labeling), source, &receivers);
    emit(&dot, a.out.as_deref())
}
