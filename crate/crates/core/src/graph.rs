//! Directed unit-capacity multigraphs.
//!
//! Every arc is an independent edge instance identified by its insertion
//! index. Parallel arcs are separate resources and a link usable in both
//! directions is two arcs. There are no reverse residual arcs: an edge
//! instance is either available or saturated.

use std::fmt;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
}

/// Immutable directed multigraph with unit capacity on every arc.
///
/// Out-adjacency lists are sorted by ascending [`EdgeId`], which fixes the
/// tie-breaking order of every breadth-first search in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    node_count: usize,
    arcs: Vec<Arc>,
    out_adjacency: Vec<Vec<EdgeId>>,
}

impl DirectedMultigraph {
    /// Builds a graph from `(tail, head)` pairs. Arc `i` becomes `EdgeId(i)`.
    pub fn new(node_count: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut table = Vec::with_capacity(arcs.len());
        let mut out_adjacency = vec![Vec::new(); node_count];
        for (index, &(tail, head)) in arcs.iter().enumerate() {
            if tail >= node_count || head >= node_count {
                return Err(GraphError::EndpointOutOfRange {
                    index,
                    tail,
                    head,
                    node_count,
                });
            }
            if tail == head {
                return Err(GraphError::SelfLoop { index, node: tail });
            }
            table.push(Arc {
                tail: NodeId(tail),
                head: NodeId(head),
            });
            // Pushing in input order keeps each list ascending.
            out_adjacency[tail].push(EdgeId(index));
        }
        Ok(Self {
            node_count,
            arcs: table,
            out_adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, e: EdgeId) -> Arc {
        self.arcs[e.0]
    }

    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.arcs[e.0].tail
    }

    pub fn head(&self, e: EdgeId) -> NodeId {
        self.arcs[e.0].head
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_edges(&self, u: NodeId) -> &[EdgeId] {
        &self.out_adjacency[u.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.arcs.len()).map(EdgeId)
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 < self.node_count {
            Ok(())
        } else {
            Err(GraphError::InvalidNode {
                node: v.0,
                node_count: self.node_count,
            })
        }
    }

    pub fn arc_pairs(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().map(|a| (a.tail.0, a.head.0)).collect()
    }
}

/// Per-edge residual capacity. Edges move from available to saturated and
/// never back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualState {
    available: Vec<bool>,
    saturated: usize,
}

impl ResidualState {
    pub fn new(g: &DirectedMultigraph) -> Self {
        Self {
            available: vec![true; g.edge_count()],
            saturated: 0,
        }
    }

    pub fn is_available(&self, e: EdgeId) -> bool {
        self.available[e.0]
    }

    /// Returns `true` if the edge was available before the call.
    pub fn saturate(&mut self, e: EdgeId) -> bool {
        let was = std::mem::replace(&mut self.available[e.0], false);
        if was {
            self.saturated += 1;
        }
        was
    }

    pub fn saturated_count(&self) -> usize {
        self.saturated
    }

    pub fn len(&self) -> usize {
        self.available.len()
    }

    pub fn is_empty(&self) -> bool {
        self.available.is_empty()
    }

    pub fn saturated_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.available
            .iter()
            .enumerate()
            .filter(|(_, &a)| !a)
            .map(|(i, _)| EdgeId(i))
    }
}

/// An ordered sequence of edge instances from a source to a receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<EdgeId>);

impl Path {
    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nodes(&self, g: &DirectedMultigraph) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        if let Some(&first) = self.0.first() {
            out.push(g.tail(first));
        }
        out.extend(self.0.iter().map(|&e| g.head(e)));
        out
    }

    /// Returns the first node visited twice, if any.
    pub fn repeated_node(&self, g: &DirectedMultigraph) -> Option<NodeId> {
        let mut seen = vec![false; g.node_count()];
        for v in self.nodes(g) {
            if std::mem::replace(&mut seen[v.0], true) {
                return Some(v);
            }
        }
        None
    }
}

/// True iff `p` is a nonempty chained node-simple walk from `s` to `r`.
pub fn validate_path(g: &DirectedMultigraph, s: NodeId, r: NodeId, p: &Path) -> bool {
    let Some((&first, &last)) = p.0.first().zip(p.0.last()) else {
        return false;
    };
    if p.0.iter().any(|e| e.0 >= g.edge_count()) {
        return false;
    }
    if g.tail(first) != s || g.head(last) != r {
        return false;
    }
    if p.0.windows(2).any(|w| g.head(w[0]) != g.tail(w[1])) {
        return false;
    }
    p.repeated_node(g).is_none()
}

/// On-disk graph description. `source` and `receivers` are optional session
/// hints carried alongside the topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receivers: Option<Vec<usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &DirectedMultigraph, source: Option<NodeId>, receivers: Option<&[NodeId]>) -> Self {
        Self {
            n: g.node_count(),
            arcs: g.arcs().iter().map(|a| [a.tail.0, a.head.0]).collect(),
            source: source.map(|s| s.0),
            receivers: receivers.map(|rs| rs.iter().map(|r| r.0).collect()),
        }
    }

    pub fn to_graph(&self) -> Result<DirectedMultigraph, GraphError> {
        let arcs: Vec<(usize, usize)> = self.arcs.iter().map(|a| (a[0], a[1])).collect();
        let g = DirectedMultigraph::new(self.n, &arcs)?;
        if let Some(s) = self.source {
            g.check_node(NodeId(s))?;
        }
        for &r in self.receivers.iter().flatten() {
            g.check_node(NodeId(r))?;
        }
        Ok(g)
    }

    pub fn session(&self) -> (Option<NodeId>, Option<Vec<NodeId>>) {
        (
            self.source.map(NodeId),
            self.receivers
                .as_ref()
                .map(|rs| rs.iter().copied().map(NodeId).collect()),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph file serializes")
    }

    pub fn read(path: &FsPath) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GraphError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> DirectedMultigraph {
        // s=0 U=1 V=2 W=3 r=4, each link as two arcs
        let links = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
        let arcs: Vec<_> = links.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        DirectedMultigraph::new(5, &arcs).unwrap()
    }

    #[test]
    fn smallest_graph() {
        let g = DirectedMultigraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.out_edges(NodeId(0)), &[EdgeId(0)]);
        assert!(g.out_edges(NodeId(1)).is_empty());
    }

    #[test]
    fn fig1_has_ten_instances() {
        assert_eq!(fig1().edge_count(), 10);
    }

    #[test]
    fn parallel_arcs_are_distinct() {
        let g = DirectedMultigraph::new(4, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_edges(NodeId(0)), &[EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn rejects_bad_arcs() {
        assert!(matches!(
            DirectedMultigraph::new(2, &[(0, 2)]),
            Err(GraphError::EndpointOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            DirectedMultigraph::new(3, &[(0, 1), (1, 1)]),
            Err(GraphError::SelfLoop { index: 1, node: 1 })
        ));
    }

    #[test]
    fn validate_path_cases() {
        let g = fig1();
        // s->r directly on a 2-node graph
        let tiny = DirectedMultigraph::new(2, &[(0, 1)]).unwrap();
        assert!(validate_path(&tiny, NodeId(0), NodeId(1), &Path(vec![EdgeId(0)])));

        // s->U (e0), U->W (e4), W->r (e8)
        let p = Path(vec![EdgeId(0), EdgeId(4), EdgeId(8)]);
        assert!(validate_path(&g, NodeId(0), NodeId(4), &p));

        // s->U then V->W: not chained
        let broken = Path(vec![EdgeId(0), EdgeId(6)]);
        assert!(!validate_path(&g, NodeId(0), NodeId(3), &broken));

        // s->U->s->V revisits s
        let looped = Path(vec![EdgeId(0), EdgeId(1), EdgeId(2)]);
        assert!(!validate_path(&g, NodeId(0), NodeId(2), &looped));

        assert!(!validate_path(&g, NodeId(0), NodeId(4), &Path(vec![])));
        assert!(!validate_path(&g, NodeId(1), NodeId(4), &p));
    }

    #[test]
    fn residual_only_saturates() {
        let g = fig1();
        let mut res = ResidualState::new(&g);
        assert!(res.saturate(EdgeId(3)));
        assert!(!res.saturate(EdgeId(3)));
        assert!(!res.is_available(EdgeId(3)));
        assert_eq!(res.saturated_count(), 1);
        assert_eq!(res.saturated_edges().collect::<Vec<_>>(), vec![EdgeId(3)]);
    }

    #[test]
    fn graph_file_round_trip() {
        let g = fig1();
        let file = GraphFile::from_graph(&g, Some(NodeId(0)), Some(&[NodeId(4)]));
        let back = GraphFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_graph().unwrap(), g);
        assert_eq!(back.session(), (Some(NodeId(0)), Some(vec![NodeId(4)])));
    }

    #[test]
    fn graph_file_rejects_bad_session() {
        let file = GraphFile {
            n: 2,
            arcs: vec![[0, 1]],
            source: Some(5),
            receivers: None,
        };
        assert!(file.to_graph().is_err());
        assert!(GraphFile::from_json("{\"n\": 2}").is_err());
    }
}
