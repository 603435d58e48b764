//! Graphviz export of step graphs with chain classes as clusters.

use std::fmt::Write as _;

use dynlab_core::orbit::StepGraph;
use dynlab_core::recurrence::chain_classes;
use dynlab_core::SystemMap;

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for the δ-step graph of `f`. Nodes and edges are sorted by label;
/// each chain class (a strongly connected component carrying a closed walk)
/// becomes a `cluster_k` subgraph.
pub fn export_dot(f: &SystemMap, graph: &StepGraph) -> String {
    let space = f.space();
    let mut order: Vec<usize> = space.points().collect();
    order.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));

    let mut classes: Vec<Vec<usize>> = chain_classes(f, graph.delta()).into_iter().map(|c| c.members).collect();
    for c in &mut classes {
        c.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));
    }
    classes.sort_by(|a, b| space.label(a[0]).cmp(space.label(b[0])));

    let mut out = String::new();
    writeln!(out, "digraph steps {{").unwrap();
    writeln!(out, "  label={};", quote(&format!("delta = {}", graph.delta()))).unwrap();
    for (k, members) in classes.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{k} {{").unwrap();
        for &p in members {
            writeln!(out, "    {};", quote(space.label(p))).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for &p in &order {
        writeln!(out, "  {};", quote(space.label(p))).unwrap();
    }
    for &x in &order {
        let mut targets = graph.successors(x).to_vec();
        targets.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));
        for y in targets {
            writeln!(out, "  {} -> {};", quote(space.label(x)), quote(space.label(y))).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
