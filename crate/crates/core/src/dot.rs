use std::fmt::Write;

use crate::graph::{DirectedMultigraph, NodeId};
use crate::online::{ColorId, ZoneLabeling};

const PALETTE: &[&str] = &[
    "blue", "darkgreen", "red", "orange", "purple", "brown", "deeppink", "teal", "gold", "navy", "olive", "crimson",
];

pub fn zone_color_name(c: ColorId) -> &'static str {
    PALETTE[c.0 % PALETTE.len()]
}

/// Renders the graph as a DOT digraph. Zone arcs get a `color` attribute and
/// a `z<id>` label; uncolored arcs are drawn gray.
pub fn to_dot(g: &DirectedMultigraph, labeling: Option<&ZoneLabeling>, source: NodeId, receivers: &[NodeId]) -> String {
    let mut out = String::new();
    out.push_str("digraph multicast {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for v in g.nodes() {
        if v == source {
            let _ = writeln!(out, "  n{v} [label=\"s\", shape=triangle, style=filled, fillcolor=lightyellow];");
        } else if let Some(i) = receivers.iter().position(|&r| r == v) {
            let _ = writeln!(out, "  n{v} [label=\"r{}\", style=filled, fillcolor=palegreen];", i + 1);
        } else {
            let _ = writeln!(out, "  n{v} [label=\"{v}\"];");
        }
    }
    for e in g.edge_ids() {
        let a = g.arc(e);
        match labeling.and_then(|l| l.color(e)) {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [id=\"e{}\", color={}, label=\"{}\", penwidth=2];",
                    a.tail, a.head, e.0, zone_color_name(c), c
                );
            }
            None => {
                let _ = writeln!(out, "  n{} -> n{} [id=\"e{}\", color=gray];", a.tail, a.head, e.0);
            }
        }
    }
    out.push_str("}\n");
    out
}
