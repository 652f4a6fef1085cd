//! Source-only linear coding over a zone labeling.
//!
//! Each zone `z` gets one coding vector `g_z`; the source sends
//! `y_z = g_z . X` on every arc of that zone and intermediate nodes only
//! forward. With Vandermonde rows `g_z = (a_z^0, ..., a_z^{K-1})` over
//! distinct points, any `K` zones span the whole symbol space, so a receiver
//! holding `K` distinct zones decodes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::CodingError;
use crate::gf::{Elem, FieldSpec};
use crate::graph::{DirectedMultigraph, NodeId};
use crate::online::{ColorId, OnlineResult};
use crate::topology::{derive_seed, rng_for};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceCodeAssignment {
    pub field: FieldSpec,
    pub k: usize,
    pub zones: Vec<ColorId>,
    /// Evaluation point per zone for Vandermonde assignments.
    pub eval_points: Option<Vec<Elem>>,
    pub coding_vectors: Vec<Vec<Elem>>,
}

impl SourceCodeAssignment {
    /// Vandermonde assignment with `a_z = z + 1` for each listed zone.
    pub fn vandermonde(field: FieldSpec, k: usize, zones: Vec<ColorId>) -> Result<Self, CodingError> {
        if k == 0 {
            return Err(CodingError::NoFeasibleCode);
        }
        let available = field.size() - 1;
        let too_small = || CodingError::FieldTooSmall {
            degree: field.degree(),
            zones: zones.len(),
            available,
        };
        if zones.len() > available || zones.iter().any(|z| z.0 + 1 > available) {
            return Err(too_small());
        }
        let f = field.field();
        let eval_points: Vec<Elem> = zones.iter().map(|z| (z.0 + 1) as Elem).collect();
        let coding_vectors = eval_points
            .iter()
            .map(|&a| (0..k).map(|j| f.pow(a, j)).collect())
            .collect();
        Ok(Self {
            field,
            k,
            zones,
            eval_points: Some(eval_points),
            coding_vectors,
        })
    }

    /// Assignment with explicitly chosen coding vectors, one per zone.
    pub fn from_rows(field: FieldSpec, zones: Vec<ColorId>, rows: Vec<Vec<Elem>>) -> Result<Self, CodingError> {
        let k = rows.first().map_or(0, Vec::len);
        if k == 0 {
            return Err(CodingError::NoFeasibleCode);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(CodingError::BlockLength {
                got: bad.len(),
                expected: k,
            });
        }
        assert_eq!(zones.len(), rows.len(), "one row per zone");
        Ok(Self {
            field,
            k,
            zones,
            eval_points: None,
            coding_vectors: rows,
        })
    }

    pub fn row(&self, zone: ColorId) -> Result<&[Elem], CodingError> {
        self.zones
            .iter()
            .position(|&z| z == zone)
            .map(|i| self.coding_vectors[i].as_slice())
            .ok_or(CodingError::UnknownZone(zone))
    }

    /// `y_z = g_z . X` for every zone, in zone order.
    pub fn encode(&self, x: &SymbolBlock) -> Result<Vec<Elem>, CodingError> {
        if x.0.len() != self.k {
            return Err(CodingError::BlockLength {
                got: x.0.len(),
                expected: self.k,
            });
        }
        let f = self.field.field();
        Ok(self.coding_vectors.iter().map(|g| f.dot(g, &x.0)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolBlock(pub Vec<Elem>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverObservation {
    pub receiver: NodeId,
    pub received: Vec<(ColorId, Elem)>,
}

/// Builds the Vandermonde assignment for every zone of `result` with
/// `K = min_i |C_i|`.
pub fn build_assignment(result: &OnlineResult, field: FieldSpec) -> Result<SourceCodeAssignment, CodingError> {
    let k = result.group_k();
    if k == 0 {
        return Err(CodingError::NoFeasibleCode);
    }
    let zones = (0..result.zone_count).map(ColorId).collect();
    SourceCodeAssignment::vandermonde(field, k, zones)
}

pub fn receiver_rank(assignment: &SourceCodeAssignment, zones: &[ColorId]) -> Result<usize, CodingError> {
    let rows = zones
        .iter()
        .map(|&z| assignment.row(z).map(<[Elem]>::to_vec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assignment.field.field().rank(&rows, assignment.k))
}

/// Sends one symbol block through the labeled subgraph.
///
/// Each colored arc carries its zone's symbol. Walking every receiver path,
/// a node forwards what arrived on the previous arc; the walk fails if an
/// arc is uncolored or belongs to a different zone than the path.
pub fn simulate_round(
    g: &DirectedMultigraph,
    result: &OnlineResult,
    assignment: &SourceCodeAssignment,
    x: &SymbolBlock,
) -> Result<Vec<ReceiverObservation>, CodingError> {
    let ys = assignment.encode(x)?;
    let symbol_of = |z: ColorId| -> Result<Elem, CodingError> {
        assignment
            .zones
            .iter()
            .position(|&zz| zz == z)
            .map(|i| ys[i])
            .ok_or(CodingError::UnknownZone(z))
    };

    let mut out = Vec::with_capacity(result.receivers.len());
    for rp in &result.receivers {
        let mut received = Vec::with_capacity(rp.paths.len());
        for (j, path) in rp.paths.iter().enumerate() {
            let mut carried: Option<(ColorId, Elem)> = None;
            for &e in path.edges() {
                debug_assert!(e.0 < g.edge_count());
                let Some(z) = result.labeling.color(e) else {
                    return Err(CodingError::UncoloredEdge {
                        receiver: rp.receiver,
                        path: j,
                        edge: e,
                    });
                };
                let on_arc = symbol_of(z)?;
                match carried {
                    None => carried = Some((z, on_arc)),
                    Some((zc, y)) if zc == z && y == on_arc => {}
                    Some(_) => {
                        return Err(CodingError::MixedPath {
                            receiver: rp.receiver,
                            path: j,
                        })
                    }
                }
            }
            if let Some(delivered) = carried {
                received.push(delivered);
            }
        }
        out.push(ReceiverObservation {
            receiver: rp.receiver,
            received,
        });
    }
    Ok(out)
}

pub fn decode(assignment: &SourceCodeAssignment, observation: &ReceiverObservation) -> Result<SymbolBlock, CodingError> {
    let f = assignment.field.field();
    let rows = observation
        .received
        .iter()
        .map(|&(z, _)| assignment.row(z).map(<[Elem]>::to_vec))
        .collect::<Result<Vec<_>, _>>()?;
    let ys: Vec<Elem> = observation.received.iter().map(|&(_, y)| y).collect();
    f.solve(&rows, &ys, assignment.k)
        .map(SymbolBlock)
        .ok_or_else(|| CodingError::Undecodable {
            receiver: observation.receiver,
            rank: f.rank(&rows, assignment.k),
            needed: assignment.k,
        })
}

/// Outcome of [`verify_round_trip`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub field: FieldSpec,
    pub k: usize,
    pub ranks: Vec<(NodeId, usize)>,
    pub blocks_decoded: usize,
}

/// Checks every receiver's zones for rank `K`, then pushes `blocks` random
/// symbol blocks drawn from `seed` through the subgraph and decodes them.
pub fn verify_round_trip(
    g: &DirectedMultigraph,
    result: &OnlineResult,
    field: FieldSpec,
    seed: u64,
    blocks: usize,
) -> Result<RoundTrip, CodingError> {
    let assignment = build_assignment(result, field)?;
    let k = assignment.k;
    let mut ranks = Vec::with_capacity(result.receivers.len());
    for rp in &result.receivers {
        let rank = receiver_rank(&assignment, &rp.colors)?;
        if rank < k {
            return Err(CodingError::Undecodable {
                receiver: rp.receiver,
                rank,
                needed: k,
            });
        }
        ranks.push((rp.receiver, rank));
    }
    let mut rng = rng_for(derive_seed(seed, &[0xdec0de]));
    for _ in 0..blocks {
        let x = SymbolBlock((0..k).map(|_| rng.gen_range(0..field.size()) as Elem).collect());
        for obs in simulate_round(g, result, &assignment, &x)? {
            if decode(&assignment, &obs)? != x {
                return Err(CodingError::Undecodable {
                    receiver: obs.receiver,
                    rank: k,
                    needed: k,
                });
            }
        }
    }
    Ok(RoundTrip {
        field,
        k,
        ranks,
        blocks_decoded: blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::online::online_construct;
    use crate::topology::{fixture_fig4, fixture_fig5, Fixture};

    #[test]
    fn k1_vectors_are_all_ones() {
        let a = SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 1, (0..5).map(ColorId).collect()).unwrap();
        assert!(a.coding_vectors.iter().all(|g| g == &vec![1]));
    }

    #[test]
    fn k2_three_zones() {
        let a = SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 2, (0..3).map(ColorId).collect()).unwrap();
        assert_eq!(a.coding_vectors, vec![vec![1, 1], vec![1, 2], vec![1, 3]]);
        assert_eq!(a.eval_points, Some(vec![1, 2, 3]));
        // 2x2 determinants by hand: ad - bc = ad + bc in characteristic 2
        let f = FieldSpec::Gf8.field();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (p, q) = (&a.coding_vectors[i], &a.coding_vectors[j]);
            let det = f.mul(p[0], q[1]) ^ f.mul(p[1], q[0]);
            assert_ne!(det, 0, "rows {i},{j}");
            assert_eq!(receiver_rank(&a, &[ColorId(i), ColorId(j)]).unwrap(), 2);
        }
    }

    #[test]
    fn field_too_small() {
        let zones: Vec<_> = (0..300).map(ColorId).collect();
        assert!(matches!(
            SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 2, zones.clone()),
            Err(CodingError::FieldTooSmall { degree: 8, zones: 300, available: 255 })
        ));
        assert!(SourceCodeAssignment::vandermonde(FieldSpec::Gf16, 2, zones).is_ok());
    }

    #[test]
    fn rank_cases() {
        let a = SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 2, (0..4).map(ColorId).collect()).unwrap();
        assert_eq!(receiver_rank(&a, &[]).unwrap(), 0);
        assert_eq!(receiver_rank(&a, &[ColorId(3)]).unwrap(), 1);
        assert_eq!(receiver_rank(&a, &[ColorId(0), ColorId(1), ColorId(2)]).unwrap(), 2);
        assert_eq!(receiver_rank(&a, &[ColorId(9)]), Err(CodingError::UnknownZone(ColorId(9))));
    }

    #[test]
    fn decode_a_plus_b() {
        let a = SourceCodeAssignment::from_rows(FieldSpec::Gf8, vec![ColorId(0), ColorId(2)], vec![vec![1, 0], vec![1, 1]])
            .unwrap();
        let (sa, sb) = (0x41, 0x42);
        let obs = ReceiverObservation {
            receiver: NodeId(6),
            received: vec![(ColorId(0), sa), (ColorId(2), sa ^ sb)],
        };
        assert_eq!(decode(&a, &obs).unwrap(), SymbolBlock(vec![sa, sb]));
    }

    #[test]
    fn decode_k1_and_rank_deficient() {
        let a = SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 1, vec![ColorId(0)]).unwrap();
        let obs = ReceiverObservation {
            receiver: NodeId(1),
            received: vec![(ColorId(0), 77)],
        };
        assert_eq!(decode(&a, &obs).unwrap(), SymbolBlock(vec![77]));

        let a2 = SourceCodeAssignment::vandermonde(FieldSpec::Gf8, 2, vec![ColorId(0), ColorId(1)]).unwrap();
        let short = ReceiverObservation {
            receiver: NodeId(3),
            received: vec![(ColorId(1), 5)],
        };
        assert_eq!(
            decode(&a2, &short),
            Err(CodingError::Undecodable { receiver: NodeId(3), rank: 1, needed: 2 })
        );
    }

    #[test]
    fn fig4_round_trip() {
        let Fixture { graph, source, receivers } = fixture_fig4();
        let res = online_construct(&graph, source, &receivers).unwrap();
        let a = build_assignment(&res, FieldSpec::Gf8).unwrap();
        assert_eq!(a.k, 2);
        assert_eq!(a.zones.len(), 3);
        for x in [vec![0, 0], vec![17, 200], vec![255, 1]] {
            let x = SymbolBlock(x);
            let obs = simulate_round(&graph, &res, &a, &x).unwrap();
            for o in &obs {
                assert_eq!(o.received.len(), 2);
                assert_eq!(decode(&a, o).unwrap(), x);
            }
        }
    }

    #[test]
    fn fig5_single_symbol() {
        let Fixture { graph, source, receivers } = fixture_fig5();
        let res = online_construct(&graph, source, &receivers).unwrap();
        let a = build_assignment(&res, FieldSpec::Gf8).unwrap();
        assert_eq!(a.k, 1);
        let x = SymbolBlock(vec![99]);
        for o in simulate_round(&graph, &res, &a, &x).unwrap() {
            assert!(o.received.iter().all(|&(_, y)| y == 99));
            assert_eq!(decode(&a, &o).unwrap(), x);
        }
    }

    #[test]
    fn mixed_path_is_caught() {
        let Fixture { graph, source, receivers } = fixture_fig4();
        let mut res = online_construct(&graph, source, &receivers).unwrap();
        let a = build_assignment(&res, FieldSpec::Gf8).unwrap();
        let e = res.receivers[0].paths[1].edges()[1];
        let other = ColorId((res.receivers[0].colors[1].0 + 1) % res.zone_count);
        res.labeling.force_color(e, Some(other));
        let err = simulate_round(&graph, &res, &a, &SymbolBlock(vec![1, 2])).unwrap_err();
        assert!(matches!(err, CodingError::MixedPath { .. }));
    }

    #[test]
    fn zero_group_flow_has_no_code() {
        let g = DirectedMultigraph::new(3, &[(0, 1)]).unwrap();
        let res = online_construct(&g, NodeId(0), &[NodeId(1), NodeId(2)]).unwrap();
        assert_eq!(build_assignment(&res, FieldSpec::Gf8), Err(CodingError::NoFeasibleCode));
    }
}
