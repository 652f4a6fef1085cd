//! Trial, grid and stress runners comparing the online construction with
//! independent per-receiver decompositions.

use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coding::verify_round_trip;
use crate::error::ExperimentError;
use crate::gf::FieldSpec;
use crate::graph::{DirectedMultigraph, GraphFile, NodeId};
use crate::maxflow::{ek_decompose_counted, group_max_flow, merge_subgraph, FlowDecomposition};
use crate::online::{check_invariants, online_construct_counted, ExpansionOrder, OnlineResult};
use crate::topology::{derive_seed, sample_session, ws_degree_for_density, SessionSpec, TopologySpec, RNG_NAME};

pub const TOOL_VERSION: &str = concat!("zonecast ", env!("CARGO_PKG_VERSION"));

pub const DAT_COLUMNS: [&str; 8] = [
    "n",
    "trials",
    "mean_receivers",
    "mean_k_ek",
    "mean_k_online",
    "mean_runtime_ratio",
    "mean_zone_count",
    "loss_trials",
];

/// What the runtime-ratio column measures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingMode {
    /// Wall-clock of the construction call, median of the repetitions.
    #[default]
    Wall,
    /// Arc inspections performed by the searches. Machine independent and
    /// deterministic.
    Scans,
}

impl std::str::FromStr for TimingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(TimingMode::Wall),
            "scans" => Ok(TimingMode::Scans),
            other => Err(format!("unknown timing mode {other:?}, expected wall or scans")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOptions {
    pub repetitions: usize,
    pub decode_blocks: usize,
    pub order: ExpansionOrder,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            repetitions: 3,
            decode_blocks: 3,
            order: ExpansionOrder::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub n: usize,
    pub topology: Option<TopologySpec>,
    pub session_seed: u64,
    pub source: NodeId,
    pub receivers: Vec<NodeId>,
    pub k_ek: usize,
    pub k_online: usize,
    pub ek_per_receiver: Vec<usize>,
    pub online_per_receiver: Vec<usize>,
    pub zone_count: usize,
    pub inherited_paths: usize,
    pub edges_in_em: usize,
    pub edges_in_merged: usize,
    pub runtime_ek_ns: u64,
    pub runtime_online_ns: u64,
    pub scans_ek: u64,
    pub scans_online: u64,
    pub invariant_violations: usize,
    /// `None` when K_online = 0 and there is nothing to decode.
    pub decode: Option<DecodeCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeCheck {
    pub field: FieldSpec,
    pub blocks: usize,
    pub failure: Option<String>,
}

impl DecodeCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl TrialResult {
    pub fn gap(&self) -> i64 {
        self.k_ek as i64 - self.k_online as i64
    }

    /// Online never beats the per-receiver baseline, overall or per receiver.
    pub fn dominance_holds(&self) -> bool {
        self.k_online <= self.k_ek
            && self
                .online_per_receiver
                .iter()
                .zip(&self.ek_per_receiver)
                .all(|(o, e)| o <= e)
    }

    pub fn decodable(&self) -> bool {
        self.decode.as_ref().is_none_or(DecodeCheck::passed)
    }

    pub fn runtime_ratio(&self, mode: TimingMode) -> f64 {
        match mode {
            TimingMode::Wall => self.runtime_online_ns.max(1) as f64 / self.runtime_ek_ns.max(1) as f64,
            TimingMode::Scans => self.scans_online.max(1) as f64 / self.scans_ek.max(1) as f64,
        }
    }
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// Independent decomposition for every receiver plus the merged edge set.
fn ek_baseline(
    g: &DirectedMultigraph,
    s: NodeId,
    receivers: &[NodeId],
    scans: &mut u64,
) -> Result<(Vec<FlowDecomposition>, usize), ExperimentError> {
    let decomps = receivers
        .iter()
        .map(|&r| ek_decompose_counted(g, s, r, scans))
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_subgraph(&decomps).len();
    Ok((decomps, merged))
}

/// Runs both constructions on a fixed instance. `seed` drives the random
/// symbol blocks of the decode check.
pub fn run_instance(
    g: &DirectedMultigraph,
    source: NodeId,
    receivers: &[NodeId],
    seed: u64,
    opts: &TrialOptions,
) -> Result<TrialResult, ExperimentError> {
    let mut scans_ek = 0;
    let (decomps, edges_in_merged) = ek_baseline(g, source, receivers, &mut scans_ek)?;
    let report = group_max_flow(&decomps)?;
    let mut scans_online = 0;
    let online = online_construct_counted(g, source, receivers, opts.order, &mut scans_online)?;

    let reps = opts.repetitions.max(1);
    let mut ek_times = Vec::with_capacity(reps);
    let mut online_times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let mut sink = 0;
        let t = Instant::now();
        let out = ek_baseline(g, source, receivers, &mut sink)?;
        ek_times.push(t.elapsed().as_nanos() as u64);
        std::hint::black_box(out);

        let t = Instant::now();
        let out = online_construct_counted(g, source, receivers, opts.order, &mut sink)?;
        online_times.push(t.elapsed().as_nanos() as u64);
        std::hint::black_box(out);
    }

    let violations = check_invariants(g, source, receivers, &online);
    let decode = if online.group_k() >= 1 {
        Some(decode_check(g, &online, seed, opts.decode_blocks))
    } else {
        None
    };

    Ok(TrialResult {
        n: g.node_count(),
        topology: None,
        session_seed: seed,
        source,
        receivers: receivers.to_vec(),
        k_ek: report.group_k,
        k_online: online.group_k(),
        ek_per_receiver: report.per_receiver.iter().map(|&(_, k)| k).collect(),
        online_per_receiver: online.k_vector(),
        zone_count: online.zone_count,
        inherited_paths: online.inherited_path_count(),
        edges_in_em: online.multicast_edges.len(),
        edges_in_merged,
        runtime_ek_ns: median(ek_times),
        runtime_online_ns: median(online_times),
        scans_ek,
        scans_online,
        invariant_violations: violations.len(),
        decode,
    })
}

/// Smallest field that has a distinct nonzero point for every zone.
pub fn field_for(zone_count: usize) -> FieldSpec {
    if zone_count < FieldSpec::Gf8.size() {
        FieldSpec::Gf8
    } else {
        FieldSpec::Gf16
    }
}

fn decode_check(g: &DirectedMultigraph, online: &OnlineResult, seed: u64, blocks: usize) -> DecodeCheck {
    let field = field_for(online.zone_count);
    DecodeCheck {
        field,
        blocks,
        failure: verify_round_trip(g, online, field, seed, blocks).err().map(|e| e.to_string()),
    }
}

pub fn run_trial(topology: &TopologySpec, session: &SessionSpec, opts: &TrialOptions) -> Result<TrialResult, ExperimentError> {
    let g = topology.generate()?;
    let sess = sample_session(&g, session)?;
    let mut result = run_instance(&g, sess.source, &sess.receivers, session.seed, opts)?;
    result.topology = Some(*topology);
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Er,
    Ws,
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "er" => Ok(ModelKind::Er),
            "ws" => Ok(ModelKind::Ws),
            other => Err(format!("unknown model {other:?}, expected er or ws")),
        }
    }
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Er => "er",
            ModelKind::Ws => "ws",
        }
    }

    /// Topology for a node count and link density. WS uses the even mean
    /// degree closest to `density * (n - 1)`.
    pub fn topology(self, n: usize, edge_density: f64, beta: f64, seed: u64) -> TopologySpec {
        match self {
            ModelKind::Er => TopologySpec::er(n, edge_density, seed),
            ModelKind::Ws => TopologySpec::ws(n, ws_degree_for_density(n, edge_density), beta, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub model: ModelKind,
    pub n_values: Vec<usize>,
    pub edge_densities: Vec<f64>,
    pub receiver_densities: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub beta: f64,
    pub timing: TimingMode,
    pub options: TrialOptions,
    /// Worker threads; trials are still aggregated in (n, trial) order.
    #[serde(skip)]
    pub jobs: usize,
}

impl GridSpec {
    /// The desk-scale grid: n = 10..=100 step 10, link densities 10/20/30%,
    /// receiver density 25%, 30 trials per cell.
    pub fn desk(model: ModelKind, base_seed: u64) -> Self {
        Self {
            model,
            n_values: (10..=100).step_by(10).collect(),
            edge_densities: vec![0.1, 0.2, 0.3],
            receiver_densities: vec![0.25],
            trials: 30,
            base_seed,
            beta: 0.1,
            timing: TimingMode::Wall,
            options: TrialOptions::default(),
            jobs: 1,
        }
    }

    /// Full sweep: n = 10..=200 step 5, receiver densities 5..25% step 5,
    /// link densities 10..50% step 5.
    pub fn full(model: ModelKind, base_seed: u64) -> Self {
        Self {
            n_values: (10..=200).step_by(5).collect(),
            edge_densities: (2..=10).map(|i| i as f64 * 0.05).collect(),
            receiver_densities: (1..=5).map(|i| i as f64 * 0.05).collect(),
            ..Self::desk(model, base_seed)
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::InvalidGrid(m.to_string()));
        if self.n_values.is_empty() || self.edge_densities.is_empty() || self.receiver_densities.is_empty() {
            return bad("node counts and densities must be nonempty");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.edge_densities.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
            return bad("edge densities must be in (0, 1]");
        }
        if self.receiver_densities.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
            return bad("receiver densities must be in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return bad("beta must be in [0, 1]");
        }
        if self.n_values.iter().any(|&n| n < 4) {
            return bad("node counts must be at least 4");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatRow {
    pub n: usize,
    pub trials: usize,
    pub mean_receivers: f64,
    pub mean_k_ek: f64,
    pub mean_k_online: f64,
    pub mean_runtime_ratio: f64,
    pub mean_zone_count: f64,
    pub loss_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatTable {
    pub name: String,
    /// Free-form `key=value` lines echoed into the header.
    pub header: Vec<String>,
    pub rows: Vec<DatRow>,
}

impl DatTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        let _ = writeln!(
            out,
            "# columns: {}",
            DAT_COLUMNS
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i}:{c}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        for line in &self.header {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "# rng: {RNG_NAME}");
        let _ = writeln!(out, "# tool: {TOOL_VERSION}");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} {} {:.4} {:.4} {:.4} {:.6} {:.4} {}",
                r.n, r.trials, r.mean_receivers, r.mean_k_ek, r.mean_k_online, r.mean_runtime_ratio, r.mean_zone_count, r.loss_trials
            );
        }
        out
    }
}

pub fn write_dat(table: &DatTable, path: &FsPath) -> Result<(), ExperimentError> {
    std::fs::write(path, table.render()).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn aggregate(n: usize, trials: &[TrialResult], timing: TimingMode) -> DatRow {
    let count = trials.len().max(1) as f64;
    let mean = |f: &dyn Fn(&TrialResult) -> f64| trials.iter().map(f).sum::<f64>() / count;
    DatRow {
        n,
        trials: trials.len(),
        mean_receivers: mean(&|t| t.receivers.len() as f64),
        mean_k_ek: mean(&|t| t.k_ek as f64),
        mean_k_online: mean(&|t| t.k_online as f64),
        mean_runtime_ratio: mean(&|t| t.runtime_ratio(timing)),
        mean_zone_count: mean(&|t| t.zone_count as f64),
        loss_trials: trials.iter().filter(|t| t.k_online < t.k_ek).count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    /// Online lost one unit against the baseline.
    Loss,
    /// Online lost more than one unit.
    GapExceeded,
    /// Some receiver got more paths online than from its own decomposition.
    Dominance,
    Invariant,
    Decode,
    /// The trial returned an error.
    Aborted,
}

impl FindingKind {
    /// Structural failures, as opposed to throughput shortfalls.
    pub fn is_structural(self) -> bool {
        matches!(self, FindingKind::Invariant | FindingKind::Decode | FindingKind::Aborted)
    }
}

/// A trial worth archiving, with the file its witness graph was written to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub cell: String,
    pub n: usize,
    pub trial: usize,
    pub k_ek: usize,
    pub k_online: usize,
    pub problem: String,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub edge_density: f64,
    pub receiver_density: f64,
    pub file: String,
    pub table: DatTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub tool: String,
    pub rng: String,
    /// The grid or stress spec that produced this report.
    pub spec: serde_json::Value,
    pub cells: Vec<CellReport>,
    /// Trials where the online construction lost throughput (gap of 1).
    pub findings: Vec<Finding>,
    /// Hard failures: dominance broken, gap of 2 or more, invariant or
    /// decode failures.
    pub failures: Vec<Finding>,
    #[serde(skip)]
    pub trials: Vec<TrialResult>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn loss_trials(&self) -> usize {
        self.cells.iter().flat_map(|c| &c.table.rows).map(|r| r.loss_trials).sum()
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `count` jobs over `jobs` workers and returns results in job order.
fn run_parallel<T: Send>(count: usize, jobs: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let jobs = jobs.clamp(1, count.max(1));
    if jobs == 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let out = f(i);
                slots.lock().expect("result slots poisoned")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|x| x.expect("every job ran"))
        .collect()
}

fn density_key(d: f64) -> u64 {
    (d * 1e6).round() as u64
}

fn cell_name(model: ModelKind, ed: f64, rd: f64) -> String {
    format!("{}_ed{:.2}_rd{:.2}", model.tag(), ed, rd)
}

fn write_witness(dir: Option<&FsPath>, name: &str, topology: &TopologySpec, session: &SessionSpec) -> Option<String> {
    let dir = dir?;
    let g = topology.generate().ok()?;
    let sess = sample_session(&g, session).ok()?;
    let file = GraphFile::from_graph(&g, Some(sess.source), Some(&sess.receivers));
    let path = dir.join(format!("witness_{name}.json"));
    std::fs::write(&path, file.to_json()).ok()?;
    Some(path.display().to_string())
}

/// Source of per-trial topology and session specs for one output table.
trait TrialPlan {
    fn specs(&self, n: usize, trial: usize) -> (TopologySpec, SessionSpec);
    fn edge_density(&self) -> f64;
    fn receiver_density(&self) -> f64;
    fn header(&self) -> Vec<String>;
}

struct CellPlan {
    model: ModelKind,
    edge_density: f64,
    receiver_density: f64,
    beta: f64,
    base_seed: u64,
}

impl CellPlan {
    fn trial_seed(&self, n: usize, trial: usize, density_tag: u64) -> u64 {
        derive_seed(
            self.base_seed,
            &[self.model as u64, density_tag, density_key(self.receiver_density), n as u64, trial as u64],
        )
    }
}

impl TrialPlan for CellPlan {
    fn specs(&self, n: usize, trial: usize) -> (TopologySpec, SessionSpec) {
        let trial_seed = self.trial_seed(n, trial, density_key(self.edge_density));
        let topology = self.model.topology(n, self.edge_density, self.beta, derive_seed(trial_seed, &[0]));
        let session = SessionSpec {
            receiver_density: self.receiver_density,
            seed: derive_seed(trial_seed, &[1]),
        };
        (topology, session)
    }

    fn edge_density(&self) -> f64 {
        self.edge_density
    }

    fn receiver_density(&self) -> f64 {
        self.receiver_density
    }

    fn header(&self) -> Vec<String> {
        let mut h = vec![
            format!("model={}", self.model.tag()),
            format!("edge_density={:.4}", self.edge_density),
            format!("receiver_density={:.4}", self.receiver_density),
        ];
        if self.model == ModelKind::Ws {
            h.push(format!("beta={}", self.beta));
        }
        h
    }
}

/// WS with a pinned mean degree instead of a link density.
struct StressPlan {
    degree: usize,
    beta: f64,
    receiver_density: f64,
    base_seed: u64,
}

impl TrialPlan for StressPlan {
    fn specs(&self, n: usize, trial: usize) -> (TopologySpec, SessionSpec) {
        // Tag 1 << 40 keeps stress seeds apart from any grid density key.
        let trial_seed = derive_seed(
            self.base_seed,
            &[ModelKind::Ws as u64, (1 << 40) | self.degree as u64, density_key(self.receiver_density), n as u64, trial as u64],
        );
        let topology = TopologySpec::ws(n, self.degree, self.beta, derive_seed(trial_seed, &[0]));
        let session = SessionSpec {
            receiver_density: self.receiver_density,
            seed: derive_seed(trial_seed, &[1]),
        };
        (topology, session)
    }

    fn edge_density(&self) -> f64 {
        0.0
    }

    fn receiver_density(&self) -> f64 {
        self.receiver_density
    }

    fn header(&self) -> Vec<String> {
        vec![
            "model=ws".to_string(),
            format!("mean_degree={}", self.degree),
            format!("beta={}", self.beta),
            format!("receiver_density={:.4}", self.receiver_density),
        ]
    }
}

fn classify(t: &TrialResult, gap_limit: i64) -> Option<(FindingKind, String)> {
    if t.invariant_violations > 0 {
        return Some((FindingKind::Invariant, format!("{} invariant violations", t.invariant_violations)));
    }
    if !t.decodable() {
        let why = t.decode.as_ref().and_then(|d| d.failure.clone()).unwrap_or_default();
        return Some((FindingKind::Decode, format!("decode check failed: {why}")));
    }
    if !t.dominance_holds() {
        return Some((
            FindingKind::Dominance,
            format!("dominance broken: online {:?} vs ek {:?}", t.online_per_receiver, t.ek_per_receiver),
        ));
    }
    if t.gap() > gap_limit {
        return Some((FindingKind::GapExceeded, format!("gap {} exceeds {gap_limit}", t.gap())));
    }
    if t.gap() > 0 {
        return Some((FindingKind::Loss, format!("throughput loss of {}", t.gap())));
    }
    None
}

struct RunShape<'a> {
    tag: &'a str,
    n_values: &'a [usize],
    trials: usize,
    base_seed: u64,
    timing: TimingMode,
    options: &'a TrialOptions,
    jobs: usize,
}

fn io_err(path: &FsPath, source: std::io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn run_cells<P: TrialPlan + Sync>(
    shape: &RunShape<'_>,
    plans: Vec<(P, String)>,
    out_dir: Option<&FsPath>,
) -> Result<(Vec<CellReport>, Vec<Finding>, Vec<Finding>, Vec<TrialResult>), ExperimentError> {
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }

    let mut cells = Vec::new();
    let mut findings = Vec::new();
    let mut failures = Vec::new();
    let mut all_trials = Vec::new();

    for (plan, name) in plans {
        let jobs: Vec<(usize, usize)> = shape
            .n_values
            .iter()
            .flat_map(|&n| (0..shape.trials).map(move |t| (n, t)))
            .collect();
        let results = run_parallel(jobs.len(), shape.jobs, |i| {
            let (n, t) = jobs[i];
            let (topology, session) = plan.specs(n, t);
            run_trial(&topology, &session, shape.options)
        });

        let mut rows = Vec::new();
        let mut results = results.into_iter();
        for &n in shape.n_values {
            let mut cell_trials = Vec::with_capacity(shape.trials);
            for t in 0..shape.trials {
                let outcome = results.next().expect("one result per job");
                let witness_for = || {
                    let (topology, session) = plan.specs(n, t);
                    write_witness(out_dir, &format!("{name}_n{n}_t{t}"), &topology, &session)
                };
                let trial = match outcome {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(Finding {
                            kind: FindingKind::Aborted,
                            cell: name.clone(),
                            n,
                            trial: t,
                            k_ek: 0,
                            k_online: 0,
                            problem: format!("trial aborted: {e}"),
                            witness: witness_for(),
                        });
                        continue;
                    }
                };
                if let Some((kind, problem)) = classify(&trial, 1) {
                    let f = Finding {
                        kind,
                        cell: name.clone(),
                        n,
                        trial: t,
                        k_ek: trial.k_ek,
                        k_online: trial.k_online,
                        problem,
                        witness: witness_for(),
                    };
                    if kind == FindingKind::Loss {
                        findings.push(f);
                    } else {
                        failures.push(f);
                    }
                }
                cell_trials.push(trial);
            }
            rows.push(aggregate(n, &cell_trials, shape.timing));
            all_trials.extend(cell_trials);
        }

        let mut header = plan.header();
        header.extend([
            format!("trials={}", shape.trials),
            format!("base_seed={}", shape.base_seed),
            format!("timing={}", match shape.timing {
                TimingMode::Wall => "wall-median",
                TimingMode::Scans => "arc-scans",
            }),
            format!("repetitions={}", shape.options.repetitions),
            format!("expansion={:?}", shape.options.order).to_lowercase(),
        ]);
        let table = DatTable {
            name: name.clone(),
            header,
            rows,
        };
        let file = format!("{name}.dat");
        if let Some(dir) = out_dir {
            write_dat(&table, &dir.join(&file))?;
        }
        cells.push(CellReport {
            edge_density: plan.edge_density(),
            receiver_density: plan.receiver_density(),
            file,
            table,
        });
    }
    let _ = shape.tag;
    Ok((cells, findings, failures, all_trials))
}

fn write_summary(report: &GridReport, out_dir: Option<&FsPath>, stem: &str) -> Result<(), ExperimentError> {
    if let Some(dir) = out_dir {
        let path: PathBuf = dir.join(format!("{stem}_summary.json"));
        std::fs::write(&path, report.summary_json()).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

/// One table per (link density, receiver density) cell, rows indexed by n.
/// Tables and the JSON summary go to `out_dir` when given.
pub fn run_grid(spec: &GridSpec, out_dir: Option<&FsPath>) -> Result<GridReport, ExperimentError> {
    spec.validate()?;
    let mut plans = Vec::new();
    for &ed in &spec.edge_densities {
        for &rd in &spec.receiver_densities {
            plans.push((
                CellPlan {
                    model: spec.model,
                    edge_density: ed,
                    receiver_density: rd,
                    beta: spec.beta,
                    base_seed: spec.base_seed,
                },
                cell_name(spec.model, ed, rd),
            ));
        }
    }
    let shape = RunShape {
        tag: spec.model.tag(),
        n_values: &spec.n_values,
        trials: spec.trials,
        base_seed: spec.base_seed,
        timing: spec.timing,
        options: &spec.options,
        jobs: spec.jobs,
    };
    let (cells, findings, failures, trials) = run_cells(&shape, plans, out_dir)?;
    let report = GridReport {
        tool: TOOL_VERSION.to_string(),
        rng: RNG_NAME.to_string(),
        spec: serde_json::to_value(spec)?,
        cells,
        findings,
        failures,
        trials,
    };
    write_summary(&report, out_dir, spec.model.tag())?;
    Ok(report)
}

/// Sparse-degree stress regime: WS with mean degree 4, rewiring 0.1 and
/// 30% receivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressSpec {
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub timing: TimingMode,
    pub options: TrialOptions,
    #[serde(skip)]
    pub jobs: usize,
}

pub const STRESS_DEGREE: usize = 4;
pub const STRESS_BETA: f64 = 0.1;
pub const STRESS_RECEIVER_DENSITY: f64 = 0.3;

impl StressSpec {
    pub fn short(base_seed: u64) -> Self {
        Self {
            n_values: (50..=300).step_by(50).collect(),
            trials: 20,
            base_seed,
            timing: TimingMode::Wall,
            options: TrialOptions::default(),
            jobs: 1,
        }
    }

    /// Report-only long sweep over n = 800..=900 step 10.
    pub fn long(base_seed: u64) -> Self {
        Self {
            n_values: (800..=900).step_by(10).collect(),
            ..Self::short(base_seed)
        }
    }
}

pub fn run_stress(spec: &StressSpec, out_dir: Option<&FsPath>) -> Result<GridReport, ExperimentError> {
    if spec.n_values.is_empty() || spec.trials == 0 {
        return Err(ExperimentError::InvalidGrid("stress needs node counts and at least one trial".into()));
    }
    if let Some(&n) = spec.n_values.iter().find(|&&n| n <= STRESS_DEGREE + 1) {
        return Err(ExperimentError::InvalidGrid(format!(
            "stress node count {n} must exceed degree {STRESS_DEGREE} plus one"
        )));
    }
    let plan = StressPlan {
        degree: STRESS_DEGREE,
        beta: STRESS_BETA,
        receiver_density: STRESS_RECEIVER_DENSITY,
        base_seed: spec.base_seed,
    };
    let name = format!("ws_stress_k{STRESS_DEGREE}_rd{STRESS_RECEIVER_DENSITY:.2}");
    let shape = RunShape {
        tag: "ws_stress",
        n_values: &spec.n_values,
        trials: spec.trials,
        base_seed: spec.base_seed,
        timing: spec.timing,
        options: &spec.options,
        jobs: spec.jobs,
    };
    let (cells, findings, failures, trials) = run_cells(&shape, vec![(plan, name)], out_dir)?;
    let report = GridReport {
        tool: TOOL_VERSION.to_string(),
        rng: RNG_NAME.to_string(),
        spec: serde_json::to_value(spec)?,
        cells,
        findings,
        failures,
        trials,
    };
    write_summary(&report, out_dir, "ws_stress")?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{fixture_fig4, fixture_fig5, Fixture};

    fn fixture_trial(f: Fixture) -> TrialResult {
        run_instance(&f.graph, f.source, &f.receivers, 5, &TrialOptions::default()).unwrap()
    }

    #[test]
    fn fig5_trial() {
        let t = fixture_trial(fixture_fig5());
        assert_eq!((t.k_ek, t.k_online), (2, 1));
        assert_eq!(t.invariant_violations, 0);
        assert!(t.dominance_holds());
        assert!(t.decodable());
    }

    #[test]
    fn fig4_trial() {
        let t = fixture_trial(fixture_fig4());
        assert_eq!((t.k_ek, t.k_online, t.zone_count), (2, 2, 3));
        assert!(t.decode.as_ref().unwrap().passed());
    }

    #[test]
    fn er_trial_dominance() {
        let t = run_trial(
            &TopologySpec::er(10, 0.5, 11),
            &SessionSpec { receiver_density: 0.25, seed: 12 },
            &TrialOptions::default(),
        )
        .unwrap();
        assert!(t.k_online <= t.k_ek);
        assert!(t.runtime_ek_ns > 0 && t.runtime_online_ns > 0);
    }
}
