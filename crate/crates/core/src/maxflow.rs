//! Per-receiver augmenting-path decomposition on unit-capacity multigraphs.
//!
//! [`ek_decompose`] repeats a breadth-first search over the residual graph,
//! saturating the forward arcs of each shortest path it finds. Flow is never
//! pushed back along a used arc, so on some digraphs the decomposition is
//! smaller than the true maximum flow; [`brute_force_max_flow`] computes the
//! exact value by min-cut enumeration and is used to measure that gap.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, GraphError};
use crate::graph::{DirectedMultigraph, EdgeId, NodeId, Path, ResidualState};

/// Largest node count the exhaustive oracle accepts.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowDecomposition {
    pub receiver: NodeId,
    pub paths: Vec<Path>,
}

impl FlowDecomposition {
    pub fn value(&self) -> usize {
        self.paths.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFlowReport {
    pub per_receiver: Vec<(NodeId, usize)>,
    pub group_k: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedSubgraph {
    pub edge_set: BTreeSet<EdgeId>,
}

impl MergedSubgraph {
    pub fn len(&self) -> usize {
        self.edge_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_set.is_empty()
    }
}

pub fn ek_decompose(g: &DirectedMultigraph, s: NodeId, r: NodeId) -> Result<FlowDecomposition, FlowError> {
    let mut scans = 0;
    ek_decompose_counted(g, s, r, &mut scans)
}

/// Same as [`ek_decompose`], adding the number of arc inspections to `scans`.
pub fn ek_decompose_counted(
    g: &DirectedMultigraph,
    s: NodeId,
    r: NodeId,
    scans: &mut u64,
) -> Result<FlowDecomposition, FlowError> {
    g.check_node(s)?;
    g.check_node(r)?;
    if s == r {
        return Err(GraphError::SourceIsReceiver(s).into());
    }

    let mut residual = ResidualState::new(g);
    let mut paths = Vec::new();
    let mut pred_edge: Vec<Option<EdgeId>> = vec![None; g.node_count()];
    let mut discovered = vec![false; g.node_count()];
    let mut queue = VecDeque::new();

    while let Some(path) = shortest_residual_path(g, s, r, &residual, &mut pred_edge, &mut discovered, &mut queue, scans) {
        for &e in path.edges() {
            residual.saturate(e);
        }
        paths.push(path);
    }
    Ok(FlowDecomposition { receiver: r, paths })
}

#[allow(clippy::too_many_arguments)]
fn shortest_residual_path(
    g: &DirectedMultigraph,
    s: NodeId,
    r: NodeId,
    residual: &ResidualState,
    pred_edge: &mut [Option<EdgeId>],
    discovered: &mut [bool],
    queue: &mut VecDeque<NodeId>,
    scans: &mut u64,
) -> Option<Path> {
    pred_edge.fill(None);
    discovered.fill(false);
    queue.clear();
    discovered[s.0] = true;
    queue.push_back(s);

    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            *scans += 1;
            if !residual.is_available(e) {
                continue;
            }
            let v = g.head(e);
            if discovered[v.0] {
                continue;
            }
            discovered[v.0] = true;
            pred_edge[v.0] = Some(e);
            if v == r {
                let mut edges = Vec::new();
                let mut x = r;
                while x != s {
                    let ex = pred_edge[x.0].expect("discovered node has a predecessor edge");
                    edges.push(ex);
                    x = g.tail(ex);
                }
                edges.reverse();
                return Some(Path(edges));
            }
            queue.push_back(v);
        }
    }
    None
}

/// K = min over receivers of the per-receiver path count.
pub fn group_max_flow(decomps: &[FlowDecomposition]) -> Result<GroupFlowReport, FlowError> {
    let per_receiver: Vec<(NodeId, usize)> = decomps.iter().map(|d| (d.receiver, d.value())).collect();
    let group_k = per_receiver
        .iter()
        .map(|&(_, k)| k)
        .min()
        .ok_or(FlowError::NoReceivers)?;
    Ok(GroupFlowReport { per_receiver, group_k })
}

pub fn merge_subgraph(decomps: &[FlowDecomposition]) -> MergedSubgraph {
    let edge_set = decomps
        .iter()
        .flat_map(|d| d.paths.iter())
        .flat_map(|p| p.edges().iter().copied())
        .collect();
    MergedSubgraph { edge_set }
}

/// Exact number of edge-disjoint `s -> r` paths, by enumerating every
/// `s`/`r` vertex bipartition and taking the smallest arc cut.
pub fn brute_force_max_flow(g: &DirectedMultigraph, s: NodeId, r: NodeId) -> Result<usize, FlowError> {
    let n = g.node_count();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(FlowError::GraphTooLarge {
            node_count: n,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    g.check_node(s)?;
    g.check_node(r)?;
    if s == r {
        return Err(GraphError::SourceIsReceiver(s).into());
    }

    let free: Vec<usize> = (0..n).filter(|&v| v != s.0 && v != r.0).collect();
    let mut best = usize::MAX;
    for mask in 0u32..(1u32 << free.len()) {
        let mut in_source_side = vec![false; n];
        in_source_side[s.0] = true;
        for (bit, &v) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                in_source_side[v] = true;
            }
        }
        let cut = g
            .arcs()
            .iter()
            .filter(|a| in_source_side[a.tail.0] && !in_source_side[a.head.0])
            .count();
        best = best.min(cut);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_path;
    use crate::topology::{fixture_fig5, Fixture};

    fn fig1() -> DirectedMultigraph {
        let links = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
        let arcs: Vec<_> = links.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        DirectedMultigraph::new(5, &arcs).unwrap()
    }

    #[test]
    fn fig1_single_bottleneck_path() {
        let g = fig1();
        let d = ek_decompose(&g, NodeId(0), NodeId(4)).unwrap();
        // s->U, U->W, W->r
        assert_eq!(d.paths, vec![Path(vec![EdgeId(0), EdgeId(4), EdgeId(8)])]);
    }

    #[test]
    fn isolated_source_has_no_paths() {
        let g = DirectedMultigraph::new(3, &[(1, 2), (2, 0)]).unwrap();
        let d = ek_decompose(&g, NodeId(0), NodeId(2)).unwrap();
        assert!(d.paths.is_empty());
    }

    #[test]
    fn fig5_each_receiver_has_two_paths() {
        let Fixture { graph, source, receivers } = fixture_fig5();
        for &r in &receivers {
            let d = ek_decompose(&graph, source, r).unwrap();
            assert_eq!(d.value(), 2, "receiver {r}");
            for p in &d.paths {
                assert!(validate_path(&graph, source, r, p));
            }
        }
        // r_1: s->a->r_1 then s->c->b->d->r_1
        let d1 = ek_decompose(&graph, source, receivers[0]).unwrap();
        let nodes: Vec<Vec<usize>> = d1.paths.iter().map(|p| p.nodes(&graph).iter().map(|v| v.0).collect()).collect();
        assert_eq!(nodes, vec![vec![0, 1, 5], vec![0, 2, 3, 4, 5]]);
    }

    #[test]
    fn rejects_invalid_endpoints() {
        let g = fig1();
        assert!(ek_decompose(&g, NodeId(0), NodeId(0)).is_err());
        assert!(ek_decompose(&g, NodeId(0), NodeId(9)).is_err());
    }

    #[test]
    fn group_flow_is_min() {
        let mk = |r: usize, k: usize| FlowDecomposition {
            receiver: NodeId(r),
            paths: vec![Path(vec![EdgeId(0)]); k],
        };
        assert_eq!(group_max_flow(&[mk(1, 2), mk(2, 2), mk(3, 2)]).unwrap().group_k, 2);
        let report = group_max_flow(&[mk(1, 2), mk(2, 2), mk(3, 1)]).unwrap();
        assert_eq!(report.group_k, 1);
        assert_eq!(report.per_receiver, vec![(NodeId(1), 2), (NodeId(2), 2), (NodeId(3), 1)]);
        assert_eq!(group_max_flow(&[mk(4, 0)]).unwrap().group_k, 0);
        assert_eq!(group_max_flow(&[]), Err(FlowError::NoReceivers));
    }

    #[test]
    fn merge_cases() {
        let g = fig1();
        let d = ek_decompose(&g, NodeId(0), NodeId(4)).unwrap();
        assert_eq!(merge_subgraph(std::slice::from_ref(&d)).len(), 3);
        assert_eq!(merge_subgraph(&[d.clone(), d.clone()]), merge_subgraph(&[d]));

        let Fixture { graph, source, receivers } = fixture_fig5();
        let all: Vec<_> = receivers.iter().map(|&r| ek_decompose(&graph, source, r).unwrap()).collect();
        assert_eq!(merge_subgraph(&all).len(), 11);
    }

    #[test]
    fn oracle_cases() {
        let g = DirectedMultigraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_force_max_flow(&g, NodeId(0), NodeId(1)).unwrap(), 1);
        let g = DirectedMultigraph::new(3, &[(1, 0), (0, 1)]).unwrap();
        assert_eq!(brute_force_max_flow(&g, NodeId(0), NodeId(2)).unwrap(), 0);
        let Fixture { graph, source, receivers } = fixture_fig5();
        for &r in &receivers {
            assert_eq!(brute_force_max_flow(&graph, source, r).unwrap(), 2);
        }
        let big = DirectedMultigraph::new(13, &[(0, 1)]).unwrap();
        assert!(matches!(
            brute_force_max_flow(&big, NodeId(0), NodeId(1)),
            Err(FlowError::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn forward_only_augmentation_can_fall_short() {
        // s=0 a=1 b=2 c=3 d=4 t=5: the shortest path s-a-c-t blocks both
        // a-d-t and b-c-t, which together carry two units.
        let g = DirectedMultigraph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (3, 5), (4, 5)]).unwrap();
        assert_eq!(ek_decompose(&g, NodeId(0), NodeId(5)).unwrap().value(), 1);
        assert_eq!(brute_force_max_flow(&g, NodeId(0), NodeId(5)).unwrap(), 2);
    }
}
