use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::graph::{TypedGraph, VertexClass, VertexId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: node-vertices as circles labelled by kind,
/// wire-vertices as points, !-vertices as squares. Each box is a cluster;
/// when boxes overlap without nesting a vertex can sit in only one
/// cluster, so its other memberships are drawn as dashed arrows.
pub fn export_dot(g: &TypedGraph) -> String {
    let parents = |v: &VertexId| -> BTreeSet<VertexId> { g.pred(v).into_iter().filter(|p| g.is_bang(p)).collect() };
    // The cluster a vertex is drawn in: its deepest containing box.
    let home = |v: &VertexId| -> Option<VertexId> {
        parents(v).into_iter().max_by_key(|b| (g.pred(b).len(), std::cmp::Reverse(b.clone())))
    };
    let mut members: BTreeMap<Option<VertexId>, Vec<VertexId>> = BTreeMap::new();
    let mut sub_boxes: BTreeMap<Option<VertexId>, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertex_ids() {
        if g.is_bang(v) {
            sub_boxes.entry(home(v)).or_default().push(v.clone());
        }
        members.entry(home(v)).or_default().push(v.clone());
    }

    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    write_level(g, None, &members, &sub_boxes, 1, &mut out);
    for (_, e) in g.edges() {
        let (s, t) = (&e.src, &e.tgt);
        if g.is_bang(s) && !g.is_bang(t) {
            if home(t).as_ref() != Some(s) && !in_cluster_chain(g, &home(t), s) {
                let _ =
                    writeln!(out, "  {} -> {} [style=dashed, arrowhead=none];", quote(s.as_str()), quote(t.as_str()));
            }
            continue;
        }
        let _ = writeln!(out, "  {} -> {};", quote(s.as_str()), quote(t.as_str()));
    }
    out.push_str("}\n");
    out
}

/// Whether cluster `b` encloses the cluster `inner` (so membership in `b`
/// is already shown by drawing).
fn in_cluster_chain(g: &TypedGraph, inner: &Option<VertexId>, b: &VertexId) -> bool {
    let mut cur = inner.clone();
    while let Some(c) = cur {
        if &c == b {
            return true;
        }
        cur = g
            .pred(&c)
            .into_iter()
            .filter(|p| g.is_bang(p))
            .max_by_key(|p| (g.pred(p).len(), std::cmp::Reverse(p.clone())));
    }
    false
}

fn write_level(
    g: &TypedGraph,
    at: Option<VertexId>,
    members: &BTreeMap<Option<VertexId>, Vec<VertexId>>,
    sub_boxes: &BTreeMap<Option<VertexId>, Vec<VertexId>>,
    depth: usize,
    out: &mut String,
) {
    let pad = "  ".repeat(depth);
    if let Some(b) = &at {
        let _ = writeln!(out, "{pad}{} [shape=square, label=\"!\"];", quote(b.as_str()));
    }
    for v in members.get(&at).into_iter().flatten() {
        let attrs = match g.vertex(v).expect("present") {
            VertexClass::Node(kind) => format!("shape=circle, label={}", quote(kind)),
            VertexClass::Wire(_) => "shape=point".to_owned(),
            VertexClass::Bang => continue,
        };
        let _ = writeln!(out, "{pad}{} [{attrs}];", quote(v.as_str()));
    }
    for b in sub_boxes.get(&at).into_iter().flatten() {
        let _ = writeln!(out, "{pad}subgraph {} {{", quote(&format!("cluster_{b}")));
        let _ = writeln!(out, "{pad}  style=dashed;");
        write_level(g, Some(b.clone()), members, sub_boxes, depth + 1, out);
        let _ = writeln!(out, "{pad}}}");
    }
}
