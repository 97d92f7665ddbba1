use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bangbox::{PatternGraph, Signature, Subgraph, TypedGraph, VertexClass, VertexId};

/// A random string graph built from whole wires: each wire is a chain of
/// 1..=3 wire-vertices that starts at a node or at the boundary and ends at
/// a node or at the boundary. Also returns the wires, as vertex lists.
pub fn string_graph(rng: &mut ChaCha8Rng, max_sigma: usize) -> (TypedGraph, Vec<Vec<VertexId>>) {
    let kinds = ["Z", "X"];
    let mut g = TypedGraph::new(Signature::new(kinds, ["wire"]).unwrap());
    let nodes = rng.gen_range(0..=3.min(max_sigma));
    for n in 0..nodes {
        g.add_vertex(format!("n{n}"), VertexClass::node(*kinds.choose(rng).unwrap())).unwrap();
    }
    let mut wires = Vec::new();
    let mut used = nodes;
    let mut e = 0;
    while used < max_sigma && rng.gen_bool(0.8) {
        let len = rng.gen_range(1..=3).min(max_sigma - used);
        let ids: Vec<VertexId> = (0..len).map(|j| VertexId::new(format!("w{}_{j}", wires.len()))).collect();
        for (j, w) in ids.iter().enumerate() {
            g.add_vertex(w.clone(), VertexClass::wire("wire")).unwrap();
            if j > 0 {
                g.add_edge(format!("e{e}"), ids[j - 1].clone(), w.clone()).unwrap();
                e += 1;
            }
        }
        if nodes > 0 && rng.gen_bool(0.7) {
            let n = format!("n{}", rng.gen_range(0..nodes));
            g.add_edge(format!("e{e}"), n, ids[0].clone()).unwrap();
            e += 1;
        }
        if nodes > 0 && rng.gen_bool(0.7) {
            let n = format!("n{}", rng.gen_range(0..nodes));
            g.add_edge(format!("e{e}"), ids[len - 1].clone(), n).unwrap();
            e += 1;
        }
        used += len;
        wires.push(ids);
    }
    (g, wires)
}

/// Close a choice of nodes and wires into an open vertex set: a chosen node
/// brings every wire attached to it.
fn open_closure(
    g: &TypedGraph,
    wires: &[Vec<VertexId>],
    nodes: &[VertexId],
    chosen_wires: &[usize],
) -> BTreeSet<VertexId> {
    let mut out: BTreeSet<VertexId> = nodes.iter().cloned().collect();
    for (i, w) in wires.iter().enumerate() {
        let touches = w.iter().any(|v| g.pred(v).union(&g.succ(v)).any(|u| nodes.contains(u)));
        if touches || chosen_wires.contains(&i) {
            out.extend(w.iter().cloned());
        }
    }
    out
}

/// A random open vertex set, optionally inside `within`.
pub fn open_set(
    rng: &mut ChaCha8Rng,
    g: &TypedGraph,
    wires: &[Vec<VertexId>],
    within: Option<&BTreeSet<VertexId>>,
) -> BTreeSet<VertexId> {
    let allowed = |v: &VertexId| within.is_none_or(|w| w.contains(v));
    let nodes: Vec<VertexId> = g.node_vertices().filter(|n| allowed(n) && rng.gen_bool(0.3)).cloned().collect();
    let chosen: Vec<usize> = (0..wires.len()).filter(|&i| wires[i].iter().all(allowed) && rng.gen_bool(0.4)).collect();
    let s = open_closure(g, wires, &nodes, &chosen);
    debug_assert!(s.iter().all(allowed));
    s
}

/// A random valid pattern graph with at most `max_sigma` node- and
/// wire-vertices and at most `max_boxes` boxes, with nesting and overlap.
pub fn pattern(seed: u64, max_sigma: usize, max_boxes: usize) -> PatternGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut g, wires) = string_graph(&mut rng, max_sigma);
    let boxes = rng.gen_range(0..=max_boxes);
    let mut contents: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut parents: Vec<BTreeSet<usize>> = Vec::new();
    for b in 0..boxes {
        let outer = if b > 0 && rng.gen_bool(0.4) { Some(rng.gen_range(0..b)) } else { None };
        let within = outer.map(|o| contents[o].clone());
        let c = open_set(&mut rng, &g, &wires, within.as_ref());
        let mut ps = BTreeSet::new();
        if let Some(o) = outer {
            ps.insert(o);
            ps.extend(parents[o].iter().copied());
        }
        contents.push(c);
        parents.push(ps);
    }
    for b in 0..boxes {
        g.add_vertex(format!("B{b}"), VertexClass::Bang).unwrap();
    }
    let mut k = 0;
    for (b, c) in contents.iter().enumerate() {
        for v in c {
            g.add_edge(format!("m{k}"), format!("B{b}"), v.clone()).unwrap();
            k += 1;
        }
        for p in &parents[b] {
            g.add_edge(format!("m{k}"), format!("B{p}"), format!("B{b}")).unwrap();
            k += 1;
        }
    }
    PatternGraph::new(g).unwrap_or_else(|e| panic!("generator produced an invalid pattern (seed {seed}): {e}"))
}

/// A random subgraph (not necessarily full) of `g`.
pub fn subgraph(rng: &mut ChaCha8Rng, g: &TypedGraph) -> Subgraph {
    let vertices: BTreeSet<VertexId> = g.vertex_ids().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    let edges = g
        .edges()
        .filter(|(_, e)| vertices.contains(&e.src) && vertices.contains(&e.tgt) && rng.gen_bool(0.7))
        .map(|(id, _)| id.clone())
        .collect();
    Subgraph { vertices, edges }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Count how many times each class occurs.
pub fn class_counts(g: &TypedGraph) -> BTreeMap<VertexClass, usize> {
    let mut m = BTreeMap::new();
    for (_, c) in g.vertices() {
        *m.entry(c.clone()).or_insert(0) += 1;
    }
    m
}
