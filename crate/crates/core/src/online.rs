//! Online color-constrained multicast construction.
//!
//! Receivers are integrated one at a time. For each receiver a breadth-first
//! search runs over `(node, active color)` states: a partial path that has not
//! yet touched a zone may take any available uncolored arc or enter any zone
//! the receiver has not already used; once inside zone `c` it may only take
//! uncolored arcs or arcs of `c`. A path that touched no zone opens a fresh
//! zone, otherwise it extends the single zone it touched. Colored arcs are
//! already saturated by the path that colored them and carry that zone's
//! symbol, so riding them costs no capacity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ConstructionError, GraphError};
use crate::graph::{validate_path, DirectedMultigraph, EdgeId, NodeId, Path, ResidualState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub usize);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.0)
    }
}

/// Partial edge -> color map plus the palette pointer that hands out fresh
/// colors `0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneLabeling {
    color: Vec<Option<ColorId>>,
    next_color: usize,
}

impl ZoneLabeling {
    pub fn new(edge_count: usize) -> Self {
        Self {
            color: vec![None; edge_count],
            next_color: 0,
        }
    }

    /// Rebuilds a labeling from explicit `(edge, color)` pairs. The palette
    /// pointer is placed after the largest color seen.
    pub fn from_pairs(edge_count: usize, pairs: &[(EdgeId, ColorId)]) -> Result<Self, GraphError> {
        let mut labeling = Self::new(edge_count);
        for &(e, c) in pairs {
            if e.0 >= edge_count {
                return Err(GraphError::Parse(format!("colored edge {e} outside 0..{edge_count}")));
            }
            if labeling.color[e.0].replace(c).is_some() {
                return Err(GraphError::Parse(format!("edge {e} colored twice")));
            }
            labeling.next_color = labeling.next_color.max(c.0 + 1);
        }
        Ok(labeling)
    }

    pub fn color(&self, e: EdgeId) -> Option<ColorId> {
        self.color[e.0]
    }

    pub fn edge_count(&self) -> usize {
        self.color.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color.iter().all(Option::is_none)
    }

    /// Number of colors handed out so far.
    pub fn palette_len(&self) -> usize {
        self.next_color
    }

    pub fn colored_edges(&self) -> impl Iterator<Item = (EdgeId, ColorId)> + '_ {
        self.color
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (EdgeId(i), c)))
    }

    /// Edges of each zone, keyed by color.
    pub fn zones(&self) -> BTreeMap<ColorId, Vec<EdgeId>> {
        let mut zones: BTreeMap<ColorId, Vec<EdgeId>> = BTreeMap::new();
        for (e, c) in self.colored_edges() {
            zones.entry(c).or_default().push(e);
        }
        zones
    }

    fn allocate(&mut self) -> ColorId {
        let c = ColorId(self.next_color);
        self.next_color += 1;
        c
    }

    /// Colors an edge once. Re-applying the same color is a no-op and
    /// returns `false`.
    fn assign(&mut self, e: EdgeId, c: ColorId) -> Result<bool, ConstructionError> {
        match self.color[e.0] {
            None => {
                self.color[e.0] = Some(c);
                Ok(true)
            }
            Some(existing) if existing == c => Ok(false),
            Some(existing) => Err(ConstructionError::Recolor {
                edge: e,
                existing,
                requested: c,
            }),
        }
    }

    /// Overwrites an edge color with no checks. Only meant for building
    /// corrupted inputs in tests of [`check_invariants`].
    #[doc(hidden)]
    pub fn force_color(&mut self, e: EdgeId, c: Option<ColorId>) {
        self.color[e.0] = c;
        if let Some(c) = c {
            self.next_color = self.next_color.max(c.0 + 1);
        }
    }
}

/// Order in which a BFS state scans its admissible out-arcs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionOrder {
    /// Plain ascending [`EdgeId`], same as the per-receiver decomposition.
    #[default]
    EdgeOrder,
    /// Uncolored arcs first, then colored arcs, each group by ascending
    /// [`EdgeId`]. Among equally short paths this prefers opening a fresh
    /// zone over joining an existing one, which spends more capacity.
    UncoloredFirst,
}

/// Working bookkeeping for the receiver currently being integrated: its
/// paths `P_i`, colors `C_i` and reserved edges `E_i`.
#[derive(Debug, Clone)]
pub struct ReceiverLedger {
    pub receiver: NodeId,
    pub paths: Vec<Path>,
    pub path_colors: Vec<ColorId>,
    pub inherited: Vec<bool>,
    used_edges: Vec<bool>,
    used_colors: Vec<bool>,
}

impl ReceiverLedger {
    pub fn new(g: &DirectedMultigraph, receiver: NodeId) -> Self {
        Self {
            receiver,
            paths: Vec::new(),
            path_colors: Vec::new(),
            inherited: Vec::new(),
            used_edges: vec![false; g.edge_count()],
            used_colors: Vec::new(),
        }
    }

    pub fn uses_color(&self, c: ColorId) -> bool {
        self.used_colors.get(c.0).copied().unwrap_or(false)
    }

    pub fn uses_edge(&self, e: EdgeId) -> bool {
        self.used_edges[e.0]
    }

    fn record(&mut self, path: Path, color: ColorId, inherited: bool) {
        for &e in path.edges() {
            self.used_edges[e.0] = true;
        }
        if self.used_colors.len() <= color.0 {
            self.used_colors.resize(color.0 + 1, false);
        }
        self.used_colors[color.0] = true;
        self.paths.push(path);
        self.path_colors.push(color);
        self.inherited.push(inherited);
    }

    fn finish(self) -> ReceiverPaths {
        ReceiverPaths {
            receiver: self.receiver,
            paths: self.paths,
            colors: self.path_colors,
            inherited: self.inherited,
        }
    }
}

/// Paths delivered to one receiver. `colors[j]` and `inherited[j]` describe
/// `paths[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverPaths {
    pub receiver: NodeId,
    pub paths: Vec<Path>,
    pub colors: Vec<ColorId>,
    pub inherited: Vec<bool>,
}

impl ReceiverPaths {
    pub fn k(&self) -> usize {
        self.paths.len()
    }

    pub fn color_set(&self) -> BTreeSet<ColorId> {
        self.colors.iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlineResult {
    pub source: NodeId,
    pub multicast_edges: BTreeSet<EdgeId>,
    pub receivers: Vec<ReceiverPaths>,
    pub labeling: ZoneLabeling,
    pub zone_count: usize,
}

/// Per-receiver `k_i` and the group value `K = min k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerReceiverThroughput {
    pub k: Vec<(NodeId, usize)>,
    pub group_k: usize,
}

impl OnlineResult {
    pub fn throughput(&self) -> PerReceiverThroughput {
        let k: Vec<_> = self.receivers.iter().map(|r| (r.receiver, r.k())).collect();
        let group_k = k.iter().map(|&(_, k)| k).min().unwrap_or(0);
        PerReceiverThroughput { k, group_k }
    }

    pub fn group_k(&self) -> usize {
        self.throughput().group_k
    }

    pub fn k_vector(&self) -> Vec<usize> {
        self.receivers.iter().map(ReceiverPaths::k).collect()
    }

    pub fn inherited_path_count(&self) -> usize {
        self.receivers
            .iter()
            .flat_map(|r| r.inherited.iter())
            .filter(|&&b| b)
            .count()
    }

    pub fn receiver_ids(&self) -> Vec<NodeId> {
        self.receivers.iter().map(|r| r.receiver).collect()
    }

    pub fn to_file(&self) -> OnlineResultFile {
        OnlineResultFile {
            source: self.source.0,
            edge_count: self.labeling.edge_count(),
            zone_count: self.zone_count,
            colors: self.labeling.colored_edges().map(|(e, c)| [e.0, c.0]).collect(),
            receivers: self.receivers.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: OnlineResultFile = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        file.into_result()
    }
}

/// JSON form of an [`OnlineResult`]: the color map as `[edge, color]` pairs
/// and per-receiver paths as edge-id sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnlineResultFile {
    pub source: usize,
    pub edge_count: usize,
    pub zone_count: usize,
    pub colors: Vec<[usize; 2]>,
    pub receivers: Vec<ReceiverPaths>,
}

impl OnlineResultFile {
    pub fn into_result(self) -> Result<OnlineResult, GraphError> {
        let pairs: Vec<_> = self.colors.iter().map(|p| (EdgeId(p[0]), ColorId(p[1]))).collect();
        let labeling = ZoneLabeling::from_pairs(self.edge_count, &pairs)?;
        for r in &self.receivers {
            if r.colors.len() != r.paths.len() || r.inherited.len() != r.paths.len() {
                return Err(GraphError::Parse(format!(
                    "receiver {} has mismatched path/color/inherited lengths",
                    r.receiver
                )));
            }
            if let Some(e) = r.paths.iter().flat_map(|p| p.edges()).find(|e| e.0 >= self.edge_count) {
                return Err(GraphError::Parse(format!("path edge {e} outside 0..{}", self.edge_count)));
            }
        }
        Ok(OnlineResult {
            source: NodeId(self.source),
            multicast_edges: pairs.iter().map(|&(e, _)| e).collect(),
            receivers: self.receivers,
            labeling,
            zone_count: self.zone_count,
        })
    }
}

/// A path found by [`constrained_bfs`] together with the zone it touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsHit {
    pub path: Path,
    pub inherited_color: Option<ColorId>,
}

type State = (NodeId, Option<ColorId>);

/// Predecessor maps over the dense `(node, active color)` table. Slot `0`
/// of each node row is the uncolored state, slot `c + 1` is color `c`. A
/// generation stamp marks live entries so a reset is O(1).
#[derive(Debug, Default)]
struct BfsWorkspace {
    stride: usize,
    stamp: Vec<u32>,
    generation: u32,
    pred: Vec<usize>,
    edge: Vec<EdgeId>,
    queue: VecDeque<usize>,
}

impl BfsWorkspace {
    /// Prepares for a search over `node_count` nodes and `palette` colors.
    fn reset(&mut self, node_count: usize, palette: usize) {
        self.queue.clear();
        let needed = palette + 1;
        if needed > self.stride || self.stamp.len() != node_count * self.stride || self.generation == u32::MAX {
            // Grow geometrically so a palette that gains one color per path
            // does not rebuild the table on every search.
            let stride = needed.max(self.stride * 2).max(4);
            let len = node_count * stride;
            self.stride = stride;
            self.stamp = vec![0; len];
            self.pred = vec![0; len];
            self.edge = vec![EdgeId(usize::MAX); len];
            self.generation = 0;
        }
        self.generation += 1;
    }

    fn index(&self, (v, c): State) -> usize {
        v.0 * self.stride + c.map_or(0, |c| c.0 + 1)
    }

    fn state(&self, i: usize) -> State {
        let slot = i % self.stride;
        (NodeId(i / self.stride), slot.checked_sub(1).map(ColorId))
    }

    /// Records the first discovery of state `i`; false if already seen.
    fn discover(&mut self, i: usize, pred: usize, edge: EdgeId) -> bool {
        if self.stamp[i] == self.generation {
            return false;
        }
        self.stamp[i] = self.generation;
        self.pred[i] = pred;
        self.edge[i] = edge;
        true
    }
}

/// Shared read-only context of one BFS round.
struct Round<'a> {
    g: &'a DirectedMultigraph,
    residual: &'a ResidualState,
    labeling: &'a ZoneLabeling,
    ledger: &'a ReceiverLedger,
}

impl Round<'_> {
    /// Successor active color if `e` may be taken from a state whose active
    /// color is `active`.
    fn admit(&self, e: EdgeId, active: Option<ColorId>) -> Option<Option<ColorId>> {
        if self.ledger.uses_edge(e) {
            return None;
        }
        match self.labeling.color(e) {
            None => self.residual.is_available(e).then_some(active),
            Some(c) if self.ledger.uses_color(c) => None,
            Some(c) => match active {
                None => Some(Some(c)),
                Some(a) if a == c => Some(Some(c)),
                Some(_) => None,
            },
        }
    }
}

/// One color-constrained BFS round from `(s, none)` towards `r`.
///
/// Returns the shortest admissible path and the single preexisting zone it
/// touches, or `None` when no admissible path remains.
pub fn constrained_bfs(
    g: &DirectedMultigraph,
    s: NodeId,
    r: NodeId,
    residual: &ResidualState,
    labeling: &ZoneLabeling,
    ledger: &ReceiverLedger,
    order: ExpansionOrder,
) -> Result<Option<BfsHit>, ConstructionError> {
    let mut ws = BfsWorkspace::default();
    let mut scans = 0;
    let round = Round {
        g,
        residual,
        labeling,
        ledger,
    };
    search(&round, s, r, order, &mut ws, &mut scans)
}

fn search(
    round: &Round<'_>,
    s: NodeId,
    r: NodeId,
    order: ExpansionOrder,
    ws: &mut BfsWorkspace,
    scans: &mut u64,
) -> Result<Option<BfsHit>, ConstructionError> {
    let g = round.g;
    ws.reset(g.node_count(), round.labeling.palette_len());
    let start = ws.index((s, None));
    ws.discover(start, start, EdgeId(usize::MAX));
    ws.queue.push_back(start);

    let passes: &[Option<bool>] = match order {
        ExpansionOrder::EdgeOrder => &[None],
        ExpansionOrder::UncoloredFirst => &[Some(false), Some(true)],
    };
    while let Some(cur) = ws.queue.pop_front() {
        let (u, active) = ws.state(cur);
        for &colored_pass in passes {
            for &e in g.out_edges(u) {
                if let Some(want_colored) = colored_pass {
                    if round.labeling.color(e).is_some() != want_colored {
                        continue;
                    }
                }
                *scans += 1;
                let Some(next_color) = round.admit(e, active) else {
                    continue;
                };
                let head = g.head(e);
                let next = ws.index((head, next_color));
                if !ws.discover(next, cur, e) {
                    continue;
                }
                if head == r {
                    return reconstruct(round, ws, start, next).map(Some);
                }
                ws.queue.push_back(next);
            }
        }
    }
    Ok(None)
}

fn reconstruct(round: &Round<'_>, ws: &BfsWorkspace, start: usize, end: usize) -> Result<BfsHit, ConstructionError> {
    let mut edges = Vec::new();
    let mut cur = end;
    while cur != start {
        edges.push(ws.edge[cur]);
        cur = ws.pred[cur];
    }
    edges.reverse();
    let path = Path(edges);
    let receiver = ws.state(end).0;

    if let Some(node) = path.repeated_node(round.g) {
        return Err(ConstructionError::NonSimplePath { receiver, node });
    }
    let touched: BTreeSet<ColorId> = path.edges().iter().filter_map(|&e| round.labeling.color(e)).collect();
    if touched.len() > 1 {
        return Err(ConstructionError::MultiColorOverlap {
            receiver,
            count: touched.len(),
        });
    }
    Ok(BfsHit {
        path,
        inherited_color: touched.into_iter().next(),
    })
}

/// Commits a path found for the receiver tracked by `ledger`.
///
/// Draws a fresh color when `inherited_color` is `None`, colors and saturates
/// the path's previously uncolored edges, and records the path in the ledger
/// and in `multicast_edges`. Returns the path's color.
pub fn integrate_path(
    path: Path,
    inherited_color: Option<ColorId>,
    residual: &mut ResidualState,
    labeling: &mut ZoneLabeling,
    ledger: &mut ReceiverLedger,
    multicast_edges: &mut BTreeSet<EdgeId>,
) -> Result<ColorId, ConstructionError> {
    if let Some(c) = inherited_color {
        // Validate before touching anything so a failure leaves state intact.
        if let Some(&e) = path.edges().iter().find(|&&e| labeling.color(e).is_some_and(|x| x != c)) {
            return Err(ConstructionError::Recolor {
                edge: e,
                existing: labeling.color(e).expect("checked above"),
                requested: c,
            });
        }
    } else if let Some(&e) = path.edges().iter().find(|&&e| labeling.color(e).is_some()) {
        let existing = labeling.color(e).expect("checked above");
        return Err(ConstructionError::Recolor {
            edge: e,
            existing,
            requested: ColorId(labeling.palette_len()),
        });
    }

    let color = inherited_color.unwrap_or_else(|| labeling.allocate());
    for &e in path.edges() {
        if labeling.assign(e, color)? {
            residual.saturate(e);
        }
        multicast_edges.insert(e);
    }
    ledger.record(path, color, inherited_color.is_some());
    Ok(color)
}

pub fn online_construct(
    g: &DirectedMultigraph,
    s: NodeId,
    receivers: &[NodeId],
) -> Result<OnlineResult, ConstructionError> {
    online_construct_with(g, s, receivers, ExpansionOrder::default())
}

pub fn online_construct_with(
    g: &DirectedMultigraph,
    s: NodeId,
    receivers: &[NodeId],
    order: ExpansionOrder,
) -> Result<OnlineResult, ConstructionError> {
    let mut scans = 0;
    online_construct_counted(g, s, receivers, order, &mut scans)
}

/// [`online_construct_with`], adding the number of arc inspections to `scans`.
pub fn online_construct_counted(
    g: &DirectedMultigraph,
    s: NodeId,
    receivers: &[NodeId],
    order: ExpansionOrder,
    scans: &mut u64,
) -> Result<OnlineResult, ConstructionError> {
    validate_session(g, s, receivers)?;

    let mut residual = ResidualState::new(g);
    let mut labeling = ZoneLabeling::new(g.edge_count());
    let mut multicast_edges = BTreeSet::new();
    let mut done = Vec::with_capacity(receivers.len());
    let mut ws = BfsWorkspace::default();

    for &r in receivers {
        let mut ledger = ReceiverLedger::new(g, r);
        loop {
            let round = Round {
                g,
                residual: &residual,
                labeling: &labeling,
                ledger: &ledger,
            };
            let Some(hit) = search(&round, s, r, order, &mut ws, scans)? else {
                break;
            };
            integrate_path(
                hit.path,
                hit.inherited_color,
                &mut residual,
                &mut labeling,
                &mut ledger,
                &mut multicast_edges,
            )?;
        }
        done.push(ledger.finish());
    }

    let zone_count = labeling.palette_len();
    Ok(OnlineResult {
        source: s,
        multicast_edges,
        receivers: done,
        labeling,
        zone_count,
    })
}

pub(crate) fn validate_session(g: &DirectedMultigraph, s: NodeId, receivers: &[NodeId]) -> Result<(), ConstructionError> {
    g.check_node(s)?;
    if receivers.is_empty() {
        return Err(ConstructionError::NoReceivers);
    }
    let mut seen = BTreeSet::new();
    for &r in receivers {
        g.check_node(r)?;
        if r == s {
            return Err(GraphError::SourceIsReceiver(s).into());
        }
        if !seen.insert(r) {
            return Err(ConstructionError::DuplicateReceiver(r));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    /// Result shape matches the session (receiver order, list lengths).
    SessionShape,
    /// Path is chained, node-simple, and runs from the source to its receiver.
    PathValidity,
    /// Every edge of a path carries exactly the path's recorded color.
    OneColorPerPath,
    /// A receiver's paths have pairwise distinct colors.
    ColorExclusivity,
    /// A receiver's paths are pairwise edge-disjoint.
    EdgeExclusivity,
    /// Every colored edge is reachable from the source within its own zone.
    ZoneRootedness,
    /// The multicast edge set equals the colored edge set; zone count matches.
    CapacityFeasibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.invariant, self.witness)
    }
}

/// Checks the structural invariants of a construction result. An empty list
/// means every invariant holds.
pub fn check_invariants(
    g: &DirectedMultigraph,
    s: NodeId,
    receivers: &[NodeId],
    result: &OnlineResult,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut flag = |invariant, witness: String| out.push(Violation { invariant, witness });

    if result.source != s {
        flag(Invariant::SessionShape, format!("result source {} != {s}", result.source));
    }
    if result.receiver_ids() != receivers {
        flag(
            Invariant::SessionShape,
            format!("receiver order {:?} != {:?}", result.receiver_ids(), receivers),
        );
    }
    if result.labeling.edge_count() != g.edge_count() {
        flag(
            Invariant::SessionShape,
            format!("labeling covers {} edges, graph has {}", result.labeling.edge_count(), g.edge_count()),
        );
        return out;
    }

    for rp in &result.receivers {
        let r = rp.receiver;
        if rp.colors.len() != rp.paths.len() || rp.inherited.len() != rp.paths.len() {
            flag(Invariant::SessionShape, format!("receiver {r}: per-path lists differ in length"));
            continue;
        }
        let mut seen_edges = BTreeMap::new();
        let mut seen_colors = BTreeMap::new();
        for (j, (p, &c)) in rp.paths.iter().zip(&rp.colors).enumerate() {
            if !validate_path(g, s, r, p) {
                flag(Invariant::PathValidity, format!("receiver {r} path {j}: {:?}", p.edges()));
                continue;
            }
            for &e in p.edges() {
                if result.labeling.color(e) != Some(c) {
                    flag(
                        Invariant::OneColorPerPath,
                        format!("receiver {r} path {j}: edge {e} has {:?}, path color {c}", result.labeling.color(e)),
                    );
                }
                if let Some(prev) = seen_edges.insert(e, j) {
                    flag(
                        Invariant::EdgeExclusivity,
                        format!("receiver {r}: edge {e} on paths {prev} and {j}"),
                    );
                }
            }
            if let Some(prev) = seen_colors.insert(c, j) {
                flag(
                    Invariant::ColorExclusivity,
                    format!("receiver {r}: color {c} on paths {prev} and {j}"),
                );
            }
        }
    }

    let colored: BTreeSet<EdgeId> = result.labeling.colored_edges().map(|(e, _)| e).collect();
    if colored != result.multicast_edges {
        let diff: Vec<_> = colored.symmetric_difference(&result.multicast_edges).collect();
        flag(
            Invariant::CapacityFeasibility,
            format!("multicast edge set differs from colored set at {diff:?}"),
        );
    }
    let zones = result.labeling.zones();
    if zones.len() != result.zone_count || zones.keys().any(|c| c.0 >= result.zone_count) {
        flag(
            Invariant::CapacityFeasibility,
            format!("zone_count {} but colors in use {:?}", result.zone_count, zones.keys().collect::<Vec<_>>()),
        );
    }

    for (c, edges) in &zones {
        let mut reached = vec![false; g.node_count()];
        reached[s.0] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in g.out_edges(u) {
                let v = g.head(e);
                if result.labeling.color(e) == Some(*c) && !reached[v.0] {
                    reached[v.0] = true;
                    stack.push(v);
                }
            }
        }
        for &e in edges {
            if !reached[g.tail(e).0] {
                flag(
                    Invariant::ZoneRootedness,
                    format!("zone {c}: edge {e} ({} -> {}) unreachable from source", g.tail(e), g.head(e)),
                );
            }
        }
    }
    out
}
