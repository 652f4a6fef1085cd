use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use zonecast::graph::GraphFile;
use zonecast::online::OnlineResult;

fn zonecast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonecast"))
        .args(args)
        .output()
        .expect("spawn zonecast")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn fixture_json_is_stable_and_loadable() {
    let a = zonecast(&["fixture", "fig5"]);
    let b = zonecast(&["fixture", "fig5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let file = GraphFile::from_json(&stdout(&a)).unwrap();
    assert_eq!(file.to_graph().unwrap().edge_count(), 11);
}

#[test]
fn unknown_fixture_is_an_input_error() {
    let o = zonecast(&["fixture", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn construct_fig5_reports_strict_loss() {
    let o = zonecast(&["construct", "--fixture", "fig5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("K=1"), "{}", stderr(&o));
    let res = OnlineResult::from_json(&stdout(&o)).unwrap();
    assert_eq!(res.k_vector(), [2, 2, 1]);
}

#[test]
fn construct_order_flag_changes_fig4_zones() {
    let edge = zonecast(&["construct", "--fixture", "fig4"]);
    let unc = zonecast(&["construct", "--fixture", "fig4", "--order", "uncolored-first"]);
    let edge = OnlineResult::from_json(&stdout(&edge)).unwrap();
    let unc = OnlineResult::from_json(&stdout(&unc)).unwrap();
    assert_eq!(edge.zone_count, 3);
    assert_eq!(unc.zone_count, 4);
    assert_eq!(zonecast(&["construct", "--fixture", "fig4", "--order", "sideways"]).status.code(), Some(1));
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("fig4.json");
    let dot = dir.path().join("fig4.dot");
    let o = zonecast(&[
        "construct",
        "--fixture",
        "fig4",
        "--out",
        res.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let v = zonecast(&["verify", "--fixture", "fig4", "--result", res.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stderr(&v));
    let v16 = zonecast(&["verify", "--fixture", "fig4", "--result", res.to_str().unwrap(), "--field", "gf16"]);
    assert!(v16.status.success(), "{}", stderr(&v16));
}

#[test]
fn verify_flags_tampered_result() {
    let dir = tempfile::tempdir().unwrap();
    let o = zonecast(&["construct", "--fixture", "fig5"]);
    let mut res = OnlineResult::from_json(&stdout(&o)).unwrap();
    // Record another path's color so it no longer matches its edges.
    let r = &mut res.receivers[0];
    r.colors[0] = r.colors[1];
    let path = dir.path().join("bad.json");
    std::fs::write(&path, res.to_json()).unwrap();
    let v = zonecast(&["verify", "--fixture", "fig5", "--result", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(2), "{}", stderr(&v));
    assert!(stderr(&v).contains("violation"));
}

#[test]
fn verify_unreachable_receiver_has_no_code() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let g = zonecast::graph::DirectedMultigraph::new(3, &[(0, 1)]).unwrap();
    let file = GraphFile::from_graph(&g, Some(zonecast::NodeId(0)), Some(&[zonecast::NodeId(1), zonecast::NodeId(2)]));
    std::fs::write(&graph, file.to_json()).unwrap();
    let res = dir.path().join("r.json");
    let o = zonecast(&["construct", "--graph", graph.to_str().unwrap(), "--out", res.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = zonecast(&["verify", "--graph", graph.to_str().unwrap(), "--result", res.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(3), "{}", stderr(&v));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(zonecast(&["construct", "--graph", "/nonexistent/g.json"]).status.code(), Some(1));
    assert_eq!(zonecast(&["construct", "--fixture", "fig5", "--source", "99"]).status.code(), Some(1));
    assert_eq!(zonecast(&["construct", "--bogus"]).status.code(), Some(1));
    assert_eq!(zonecast(&["grid", "--trials", "0", "--out", "/tmp/unused"]).status.code(), Some(1));
    assert_eq!(zonecast(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_is_seeded() {
    let args = ["generate", "--model", "ws", "--n", "30", "--edge-density", "0.2", "--seed", "9"];
    let a = zonecast(&args);
    let b = zonecast(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let file = GraphFile::from_json(&stdout(&a)).unwrap();
    let (s, r) = file.session();
    assert!(s.is_some() && !r.unwrap().is_empty());
}

#[test]
fn construct_from_model_matches_generated_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let gen = ["--model", "er", "--n", "25", "--edge-density", "0.2", "--seed", "4"];
    let mut args = vec!["generate"];
    args.extend(gen);
    args.extend(["--out", graph.to_str().unwrap()]);
    assert!(zonecast(&args).status.success());
    let mut args = vec!["construct"];
    args.extend(gen);
    let direct = zonecast(&args);
    let via_file = zonecast(&["construct", "--graph", graph.to_str().unwrap()]);
    assert!(direct.status.success(), "{}", stderr(&direct));
    assert_eq!(direct.stdout, via_file.stdout);
    assert_eq!(zonecast(&["construct", "--model", "er", "--fixture", "fig5"]).status.code(), Some(1));
    assert_eq!(zonecast(&["construct", "--model", "ws", "--n", "10"]).status.code(), Some(1));
}

#[test]
fn export_dot_colors_zones() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("r.json");
    zonecast(&["construct", "--fixture", "fig1", "--out", res.to_str().unwrap()]);
    let plain = zonecast(&["export-dot", "--fixture", "fig1"]);
    let colored = zonecast(&["export-dot", "--fixture", "fig1", "--result", res.to_str().unwrap()]);
    assert!(plain.status.success() && colored.status.success());
    assert!(stdout(&plain).starts_with("digraph"));
    assert_ne!(plain.stdout, colored.stdout);
}

#[test]
fn small_grid_is_reproducible_in_scan_mode() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |out: &Path| {
        zonecast(&[
            "grid", "--model", "ws", "--n-min", "10", "--n-max", "30", "--n-step", "10", "--trials", "4",
            "--edge-densities", "0.1,0.3", "--timing", "scans", "--jobs", "2", "--out", out.to_str().unwrap(),
        ])
    };
    let (oa, ob) = (run(a.path()), run(b.path()));
    assert!(oa.status.success(), "{}", stderr(&oa));
    assert!(ob.status.success());
    let (fa, fb) = (dir_contents(a.path()), dir_contents(b.path()));
    assert!(fa.keys().filter(|k| k.ends_with(".dat")).count() == 2, "{:?}", fa.keys());
    assert_eq!(fa, fb);
}

#[test]
fn stress_subset_runs() {
    let out = tempfile::tempdir().unwrap();
    let o = zonecast(&[
        "stress", "--n-values", "20,40", "--trials", "3", "--timing", "scans", "--out", out.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.path().join("ws_stress_k4_rd0.30.dat").exists());
}
