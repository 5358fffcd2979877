//! Graphviz rendering of an unwinding.

use std::fmt::Write;

use super::graph::{Graph, OMEGA};
use crate::system::CoreSystem;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes in id order, edges in (source, transition) order. With `hide_sink`
/// the sink and the edges into it are left out.
pub fn export_dot(sys: &CoreSystem, g: &Graph, hide_sink: bool) -> String {
    let sig = &sys.sig;
    let mut out = String::from("digraph unwinding {\n  node [shape=box];\n");
    for (v, vertex) in g.vertices.iter().enumerate() {
        if hide_sink && v == OMEGA {
            continue;
        }
        let bads: Vec<String> = vertex
            .bads
            .iter()
            .map(|b| g.bad_cube(*b).display(sig).to_string())
            .collect();
        let bad = if bads.is_empty() { "∅".to_string() } else { bads.join("; ") };
        let label = format!(
            "{}\\nW: {}\\nB: {}",
            escape(&g.name(v)),
            escape(&vertex.world.display(sig).to_string()),
            escape(&bad)
        );
        writeln!(out, "  n{v} [label=\"{label}\"];").unwrap();
    }
    for (&(v, tau), &t) in &g.edges {
        if hide_sink && t == OMEGA {
            continue;
        }
        writeln!(out, "  n{v} -> n{t} [label=\"{}\"];", escape(&sys.transitions[tau].name)).unwrap();
    }
    out.push_str("}\n");
    out
}
