use std::collections::BTreeSet;

use proptest::prelude::*;

use zonecast::coding::{verify_round_trip, SourceCodeAssignment};
use zonecast::experiments::field_for;
use zonecast::gf::FieldSpec;
use zonecast::graph::{validate_path, DirectedMultigraph, GraphFile, NodeId};
use zonecast::maxflow::{brute_force_max_flow, ek_decompose};
use zonecast::online::{check_invariants, online_construct_with, ColorId, ExpansionOrder, OnlineResult};

#[derive(Debug, Clone)]
struct Instance {
    graph: DirectedMultigraph,
    source: NodeId,
    receivers: Vec<NodeId>,
}

fn instance() -> impl Strategy<Value = Instance> {
    (3usize..=9).prop_flat_map(|n| {
        let arcs = prop::collection::vec((0..n, 0..n), 0..(3 * n));
        let receivers = prop::collection::btree_set(1..n, 1..n.min(4));
        (Just(n), arcs, receivers).prop_map(|(n, arcs, receivers)| {
            let arcs: Vec<_> = arcs.into_iter().filter(|(u, v)| u != v).collect();
            Instance {
                graph: DirectedMultigraph::new(n, &arcs).unwrap(),
                source: NodeId(0),
                receivers: receivers.into_iter().map(NodeId).collect(),
            }
        })
    })
}

fn order() -> impl Strategy<Value = ExpansionOrder> {
    prop_oneof![Just(ExpansionOrder::EdgeOrder), Just(ExpansionOrder::UncoloredFirst)]
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Gf8), Just(FieldSpec::Gf16)]
}

fn elem(f: FieldSpec) -> impl Strategy<Value = u16> {
    (0..f.size() as u32).prop_map(|x| x as u16)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn online_result_satisfies_invariants(inst in instance(), order in order()) {
        let res = online_construct_with(&inst.graph, inst.source, &inst.receivers, order).unwrap();
        let violations = check_invariants(&inst.graph, inst.source, &inst.receivers, &res);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn online_never_exceeds_max_flow(inst in instance(), order in order()) {
        let res = online_construct_with(&inst.graph, inst.source, &inst.receivers, order).unwrap();
        for rp in &res.receivers {
            let exact = brute_force_max_flow(&inst.graph, inst.source, rp.receiver).unwrap();
            prop_assert!(rp.k() <= exact);
        }
    }

    #[test]
    fn online_first_receiver_matches_its_flow(inst in instance()) {
        // The first receiver sees an uncolored graph, so it gets a full EK decomposition.
        let res = online_construct_with(&inst.graph, inst.source, &inst.receivers, ExpansionOrder::EdgeOrder).unwrap();
        let ek = ek_decompose(&inst.graph, inst.source, inst.receivers[0]).unwrap();
        prop_assert_eq!(res.receivers[0].k(), ek.value());
    }

    #[test]
    fn construction_is_deterministic(inst in instance(), order in order()) {
        let a = online_construct_with(&inst.graph, inst.source, &inst.receivers, order).unwrap();
        let b = online_construct_with(&inst.graph, inst.source, &inst.receivers, order).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ek_paths_are_valid_and_disjoint(inst in instance()) {
        for &r in &inst.receivers {
            let d = ek_decompose(&inst.graph, inst.source, r).unwrap();
            let mut used = BTreeSet::new();
            for p in &d.paths {
                prop_assert!(validate_path(&inst.graph, inst.source, r, p));
                for &e in p.edges() {
                    prop_assert!(used.insert(e), "edge {:?} reused", e);
                }
            }
            prop_assert!(d.value() <= brute_force_max_flow(&inst.graph, inst.source, r).unwrap());
        }
    }

    #[test]
    fn every_receiver_decodes(inst in instance(), seed in any::<u64>()) {
        let res = online_construct_with(&inst.graph, inst.source, &inst.receivers, ExpansionOrder::EdgeOrder).unwrap();
        prop_assume!(res.group_k() >= 1);
        let trip = verify_round_trip(&inst.graph, &res, field_for(res.zone_count), seed, 2).unwrap();
        prop_assert_eq!(trip.k, res.group_k());
        prop_assert!(trip.ranks.iter().all(|&(_, r)| r == trip.k));
    }

    #[test]
    fn graph_json_round_trips(inst in instance()) {
        let file = GraphFile::from_graph(&inst.graph, Some(inst.source), Some(&inst.receivers));
        let back = GraphFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), inst.graph.clone());
        prop_assert_eq!(back.session(), (Some(inst.source), Some(inst.receivers.clone())));
    }

    #[test]
    fn result_json_round_trips(inst in instance(), order in order()) {
        let res = online_construct_with(&inst.graph, inst.source, &inst.receivers, order).unwrap();
        prop_assert_eq!(OnlineResult::from_json(&res.to_json()).unwrap(), res);
    }

    #[test]
    fn vandermonde_rows_are_mds(f in field(), zones in 1usize..12, k in 1usize..6) {
        prop_assume!(k <= zones);
        let ids: Vec<_> = (0..zones).map(ColorId).collect();
        let a = SourceCodeAssignment::vandermonde(f, k, ids.clone()).unwrap();
        let gf = f.field();
        // Any k consecutive rows (cyclically) have full rank.
        for start in 0..zones {
            let rows: Vec<Vec<u16>> = (0..k).map(|i| a.row(ids[(start + i) % zones]).unwrap().to_vec()).collect();
            prop_assert_eq!(gf.rank(&rows, k), k);
        }
    }
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn field_axioms(f in field(), seeds in any::<[u16; 3]>()) {
        let gf = f.field();
        let m = f.size() as u32;
        let [a, b, c] = seeds.map(|x| (x as u32 % m) as u16);
        prop_assert_eq!(gf.mul(a, gf.mul(b, c)), gf.mul(gf.mul(a, b), c));
        prop_assert_eq!(gf.mul(a, b), gf.mul(b, a));
        prop_assert_eq!(gf.mul(a, gf.add(b, c)), gf.add(gf.mul(a, b), gf.mul(a, c)));
        prop_assert_eq!(gf.add(a, a), 0);
        prop_assert_eq!(gf.mul(a, 1), a);
        match gf.inv(a) {
            Some(i) => prop_assert_eq!(gf.mul(a, i), 1),
            None => prop_assert_eq!(a, 0),
        }
    }

    #[test]
    fn solve_inverts_encoding(f in field(), x0 in elem(FieldSpec::Gf8), x1 in elem(FieldSpec::Gf8), r in 1u16..200) {
        let gf = f.field();
        let a = vec![vec![1, r], vec![r, 1]];
        let y = [gf.add(x0, gf.mul(r, x1)), gf.add(gf.mul(r, x0), x1)];
        // [[1,r],[r,1]] is singular exactly when r*r == 1, i.e. r == 1.
        match gf.solve(&a, &y, 2) {
            Some(x) => prop_assert_eq!(x, vec![x0, x1]),
            None => prop_assert_eq!(r, 1),
        }
    }
}
