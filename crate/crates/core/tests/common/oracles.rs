//! Brute-force reference implementations. None of these call into the
//! library beyond reading graph structure.

use std::collections::{BTreeMap, BTreeSet};

use bangbox::{EdgeId, GraphMap, TypedGraph, VertexClass, VertexId};

/// A vertex map and an edge map, as plain tables.
pub type RawMap = (BTreeMap<VertexId, VertexId>, BTreeMap<EdgeId, EdgeId>);

pub fn raw(m: &GraphMap) -> RawMap {
    (m.vertices.clone(), m.edges.clone())
}

fn injective_vertex_maps(l: &TypedGraph, h: &TypedGraph) -> Vec<BTreeMap<VertexId, VertexId>> {
    let lv: Vec<(&VertexId, &VertexClass)> = l.vertices().collect();
    let hv: Vec<(&VertexId, &VertexClass)> = h.vertices().collect();
    let mut out = Vec::new();
    let mut cur = BTreeMap::new();
    let mut used = BTreeSet::new();
    fn go<'a>(
        i: usize,
        lv: &[(&'a VertexId, &'a VertexClass)],
        hv: &[(&'a VertexId, &'a VertexClass)],
        cur: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
        out: &mut Vec<BTreeMap<VertexId, VertexId>>,
    ) {
        if i == lv.len() {
            out.push(cur.clone());
            return;
        }
        for (h, hc) in hv {
            if *hc == lv[i].1 && !used.contains(*h) {
                used.insert((*h).clone());
                cur.insert(lv[i].0.clone(), (*h).clone());
                go(i + 1, lv, hv, cur, used, out);
                cur.remove(lv[i].0);
                used.remove(*h);
            }
        }
    }
    go(0, &lv, &hv, &mut cur, &mut used, &mut out);
    out
}

fn injective_edge_maps(
    l: &TypedGraph,
    h: &TypedGraph,
    f: &BTreeMap<VertexId, VertexId>,
) -> Vec<BTreeMap<EdgeId, EdgeId>> {
    let le: Vec<(&EdgeId, VertexId, VertexId)> =
        l.edges().map(|(id, e)| (id, f[&e.src].clone(), f[&e.tgt].clone())).collect();
    let mut out = Vec::new();
    fn go(
        i: usize,
        le: &[(&EdgeId, VertexId, VertexId)],
        h: &TypedGraph,
        cur: &mut BTreeMap<EdgeId, EdgeId>,
        out: &mut Vec<BTreeMap<EdgeId, EdgeId>>,
    ) {
        if i == le.len() {
            out.push(cur.clone());
            return;
        }
        let (id, s, t) = &le[i];
        for (hid, he) in h.edges() {
            if &he.src == s && &he.tgt == t && !cur.values().any(|x| x == hid) {
                cur.insert((*id).clone(), hid.clone());
                go(i + 1, le, h, cur, out);
                cur.remove(*id);
            }
        }
    }
    go(0, &le, h, &mut BTreeMap::new(), &mut out);
    out
}

/// Every injective class-preserving homomorphism `l -> h` that is full at
/// node-vertices: each node's image has no more in- or out-edges than the
/// node itself.
pub fn matchings(l: &TypedGraph, h: &TypedGraph) -> BTreeSet<RawMap> {
    let mut out = BTreeSet::new();
    for f in injective_vertex_maps(l, h) {
        for g in injective_edge_maps(l, h, &f) {
            let full = l.vertices().filter(|(_, c)| c.is_node()).all(|(n, _)| {
                let img = &f[n];
                let h_in = h.edges().filter(|(_, e)| &e.tgt == img).count();
                let h_out = h.edges().filter(|(_, e)| &e.src == img).count();
                let l_in = l.edges().filter(|(_, e)| &e.tgt == n).count();
                let l_out = l.edges().filter(|(_, e)| &e.src == n).count();
                h_in == l_in && h_out == l_out
            });
            if full {
                out.insert((f.clone(), g));
            }
        }
    }
    out
}

/// Inputs and outputs of the subgraph `(vs, es)` of `g`: wire-vertices with
/// no in-edge, resp. no out-edge, among `es`.
fn boundary(
    g: &TypedGraph,
    vs: &BTreeSet<VertexId>,
    es: &BTreeSet<EdgeId>,
) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let wires = vs.iter().filter(|v| g.vertex(v).is_some_and(|c| c.is_wire()));
    let mut ins = BTreeSet::new();
    let mut outs = BTreeSet::new();
    for w in wires {
        let has_in = es.iter().any(|e| g.edge(e).is_some_and(|x| &x.tgt == w && !g.vertex(&x.src).unwrap().is_bang()));
        let has_out = es.iter().any(|e| g.edge(e).is_some_and(|x| &x.src == w));
        if !has_in {
            ins.insert(w.clone());
        }
        if !has_out {
            outs.insert(w.clone());
        }
    }
    (ins, outs)
}

/// Whether `(ov, oe)` is an open subgraph of the subgraph `(hv, he)` of
/// `g`: it is full in `(hv, he)`, and deleting it creates no new inputs or
/// outputs.
pub fn is_open_in(
    g: &TypedGraph,
    (hv, he): (&BTreeSet<VertexId>, &BTreeSet<EdgeId>),
    (ov, oe): (&BTreeSet<VertexId>, &BTreeSet<EdgeId>),
) -> bool {
    if !ov.is_subset(hv) || !oe.is_subset(he) {
        return false;
    }
    let full = he.iter().all(|e| {
        let x = g.edge(e).unwrap();
        !(ov.contains(&x.src) && ov.contains(&x.tgt)) || oe.contains(e)
    });
    if !full {
        return false;
    }
    let rest_v: BTreeSet<VertexId> = hv.difference(ov).cloned().collect();
    let rest_e: BTreeSet<EdgeId> = he
        .iter()
        .filter(|e| {
            let x = g.edge(e).unwrap();
            rest_v.contains(&x.src) && rest_v.contains(&x.tgt)
        })
        .cloned()
        .collect();
    let (ins, outs) = boundary(g, hv, he);
    let (rest_in, rest_out) = boundary(g, &rest_v, &rest_e);
    rest_in.is_subset(&ins) && rest_out.is_subset(&outs)
}

/// Inputs and outputs of a whole graph.
pub fn boundary_of(g: &TypedGraph) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let (vs, es) = all_of(g);
    boundary(g, &vs, &es)
}

pub fn all_of(g: &TypedGraph) -> (BTreeSet<VertexId>, BTreeSet<EdgeId>) {
    (g.vertex_ids().cloned().collect(), g.edge_ids().cloned().collect())
}

/// The full subgraph of `g` on `vs`.
pub fn full_on(g: &TypedGraph, vs: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    g.edges().filter(|(_, e)| vs.contains(&e.src) && vs.contains(&e.tgt)).map(|(id, _)| id.clone()).collect()
}

/// Every subgraph `D` of `g` completing `I -> L -> G` to a pushout square
/// `I -> D -> G` with `I -> D` equal to `m . i1`.
///
/// Both legs out of `I` are monos, so the leg `D -> G` is mono as well and
/// `D` may be taken to be a subgraph of `G`; the square is then a pushout
/// exactly when `G = m(L) ∪ D` and `m(L) ∩ D = m(i1(I))`. Vertex subsets
/// are searched exhaustively, and for each surviving one every edge subset
/// on it.
pub fn pushout_complements(
    interface: &TypedGraph,
    i1: &GraphMap,
    g: &TypedGraph,
    m: &GraphMap,
) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
    let gv: Vec<VertexId> = g.vertex_ids().cloned().collect();
    assert!(gv.len() <= 20, "host too large for exhaustive search");
    let ml_v: BTreeSet<VertexId> = m.vertices.values().cloned().collect();
    let ml_e: BTreeSet<EdgeId> = m.edges.values().cloned().collect();
    let mi_v: BTreeSet<VertexId> = interface.vertex_ids().map(|p| m.vertices[&i1.vertices[p]].clone()).collect();
    let mi_e: BTreeSet<EdgeId> = interface.edge_ids().map(|e| m.edges[&i1.edges[e]].clone()).collect();
    let all_v: BTreeSet<VertexId> = gv.iter().cloned().collect();
    let all_e: BTreeSet<EdgeId> = g.edge_ids().cloned().collect();

    let mut found = Vec::new();
    for mask in 0u32..(1 << gv.len()) {
        let dv: BTreeSet<VertexId> = (0..gv.len()).filter(|i| mask >> i & 1 == 1).map(|i| gv[i].clone()).collect();
        let union: BTreeSet<VertexId> = dv.union(&ml_v).cloned().collect();
        let meet: BTreeSet<VertexId> = dv.intersection(&ml_v).cloned().collect();
        if union != all_v || meet != mi_v {
            continue;
        }
        let candidates: Vec<EdgeId> = full_on(g, &dv).into_iter().collect();
        assert!(candidates.len() <= 20, "too many edges for exhaustive search");
        for emask in 0u32..(1 << candidates.len()) {
            let de: BTreeSet<EdgeId> =
                (0..candidates.len()).filter(|i| emask >> i & 1 == 1).map(|i| candidates[i].clone()).collect();
            let union: BTreeSet<EdgeId> = de.union(&ml_e).cloned().collect();
            let meet: BTreeSet<EdgeId> = de.intersection(&ml_e).cloned().collect();
            if union == all_e && meet == mi_e {
                found.push((dv.clone(), de));
            }
        }
    }
    found
}

/// Depth-two trees: whether every child of the root has the same number
/// of children. The root is the node without in-edges.
pub fn is_balanced(g: &TypedGraph) -> bool {
    let children = |v: &VertexId| -> Vec<VertexId> {
        // Step over the wire-vertex between two nodes.
        g.edges()
            .filter(|(_, e)| &e.src == v)
            .flat_map(|(_, e)| g.edges().filter(move |(_, f)| f.src == e.tgt).map(|(_, f)| f.tgt.clone()))
            .collect()
    };
    let roots: Vec<&VertexId> =
        g.vertices().filter(|(v, c)| c.is_node() && !g.edges().any(|(_, e)| &e.tgt == *v)).map(|(v, _)| v).collect();
    assert_eq!(roots.len(), 1, "not a rooted tree");
    let counts: BTreeSet<usize> = children(roots[0]).iter().map(|c| children(c).len()).collect();
    counts.len() <= 1
}
