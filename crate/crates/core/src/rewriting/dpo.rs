use std::collections::BTreeSet;

use crate::graph::{EdgeId, GraphMap, Subgraph, TypedGraph, VertexId};
use crate::matching::{verify_matching, Matching};

use super::{RewriteError, RewriteRule};

/// The pushout complement `G -m L` with the two maps completing the left
/// square `I -> D -> G`.
#[derive(Clone, Debug)]
pub struct Complement {
    pub graph: TypedGraph,
    pub interface_map: GraphMap,
    pub inclusion: GraphMap,
}

/// Both squares of one double-pushout step.
#[derive(Clone, Debug)]
pub struct DpoTrace {
    pub rule: String,
    pub step: usize,
    pub host: TypedGraph,
    pub matching: Matching,
    pub complement: TypedGraph,
    /// `I -> D`
    pub interface_to_complement: GraphMap,
    /// `D -> G`, an inclusion.
    pub complement_to_host: GraphMap,
    pub result: TypedGraph,
    /// `R -> G'`
    pub rhs_to_result: GraphMap,
    /// `D -> G'`, an inclusion.
    pub complement_to_result: GraphMap,
}

/// Delete the image of the interior of `L`: every matched edge and every
/// matched vertex that is not an interface point.
pub fn pushout_complement(r: &RewriteRule, g: &TypedGraph, m: &Matching) -> Result<Complement, RewriteError> {
    verify_matching(&r.lhs, g, m)?;
    let interface_images: BTreeSet<&VertexId> = r.i1.vertices.values().collect();
    let mut doomed = Subgraph::empty();
    for e in r.lhs.edge_ids() {
        doomed.edges.insert(m.edges[e].clone());
    }
    for v in r.lhs.vertex_ids().filter(|v| !interface_images.contains(v)) {
        let image = &m.vertices[v];
        if g.incident_edges(image).any(|e| !doomed.edges.contains(e)) {
            return Err(RewriteError::Dangling(image.clone()));
        }
        doomed.vertices.insert(image.clone());
    }
    let graph = g.subtract(&doomed)?;
    let interface_map = GraphMap {
        vertices: r.interface.vertex_ids().map(|p| (p.clone(), m.vertices[&r.i1.vertices[p]].clone())).collect(),
        edges: Default::default(),
    };
    let inclusion = GraphMap::identity(&graph);
    Ok(Complement { graph, interface_map, inclusion })
}

fn fresh_vertex(g: &TypedGraph, base: String) -> VertexId {
    let base = VertexId::new(base);
    if !g.contains_vertex(&base) {
        return base;
    }
    (1..).map(|n| base.copy(n)).find(|v| !g.contains_vertex(v)).expect("unbounded")
}

fn fresh_edge(g: &TypedGraph, base: String) -> EdgeId {
    let base = EdgeId::new(base);
    if !g.contains_edge(&base) {
        return base;
    }
    (1..).map(|n| base.copy(n)).find(|e| !g.contains_edge(e)).expect("unbounded")
}

/// Rewrite `g` at `m`. Vertices and edges new from `R` are named
/// `{id}@{rule}#{step}`, so replaying a derivation reproduces its ids.
pub fn apply_rewrite(r: &RewriteRule, g: &TypedGraph, m: &Matching, step: usize) -> Result<DpoTrace, RewriteError> {
    let c = pushout_complement(r, g, m)?;
    let mut result = c.graph.clone();
    result.set_signature(g.signature().merged(r.rhs.signature()));
    let mut rhs_to_result = GraphMap::default();
    for (p, rv) in &r.i2.vertices {
        if r.interface.contains_vertex(p) {
            rhs_to_result.vertices.insert(rv.clone(), c.interface_map.vertices[p].clone());
        }
    }
    for (v, class) in r.rhs.vertices() {
        if rhs_to_result.vertices.contains_key(v) {
            continue;
        }
        let id = fresh_vertex(&result, format!("{v}@{}#{step}", r.name));
        result.add_vertex(id.clone(), class.clone())?;
        rhs_to_result.vertices.insert(v.clone(), id);
    }
    for (e, edge) in r.rhs.edges() {
        let id = fresh_edge(&result, format!("{e}@{}#{step}", r.name));
        result.add_edge(
            id.clone(),
            rhs_to_result.vertices[&edge.src].clone(),
            rhs_to_result.vertices[&edge.tgt].clone(),
        )?;
        rhs_to_result.edges.insert(e.clone(), id);
    }
    if result.is_string_graph() != Ok(true) {
        return Err(RewriteError::ResultNotStringGraph);
    }
    let complement_to_result = GraphMap::identity(&c.graph);
    Ok(DpoTrace {
        rule: r.name.clone(),
        step,
        host: g.clone(),
        matching: m.clone(),
        complement: c.graph,
        interface_to_complement: c.interface_map,
        complement_to_host: c.inclusion,
        result,
        rhs_to_result,
        complement_to_result,
    })
}

impl DpoTrace {
    /// Re-check both squares: they commute, and each outer graph is the
    /// union of the two images meeting exactly in the image of `I`.
    pub fn check_squares(&self, r: &RewriteRule) -> Result<(), String> {
        let left_a = r.i1.then(&self.matching);
        let left_b = self.interface_to_complement.then(&self.complement_to_host);
        if left_a.vertices != left_b.vertices {
            return Err("left square does not commute".into());
        }
        let right_a = r.i2.then(&self.rhs_to_result);
        let right_b = self.interface_to_complement.then(&self.complement_to_result);
        if right_a.vertices != right_b.vertices {
            return Err("right square does not commute".into());
        }
        check_union(&self.host, &r.lhs, &self.matching, &self.complement_to_host, &left_a)
            .map_err(|e| format!("left square: {e}"))?;
        check_union(&self.result, &r.rhs, &self.rhs_to_result, &self.complement_to_result, &right_a)
            .map_err(|e| format!("right square: {e}"))
    }
}

/// `outer` is covered by the images of `a` and `d`, which overlap exactly in
/// the image of the interface, and nothing else is identified.
fn check_union(
    outer: &TypedGraph,
    inner: &TypedGraph,
    a: &GraphMap,
    d: &GraphMap,
    interface: &GraphMap,
) -> Result<(), String> {
    a.check_homomorphism(inner, outer)?;
    let a_imgs: BTreeSet<&VertexId> = a.vertices.values().collect();
    let d_imgs: BTreeSet<&VertexId> = d.vertices.values().collect();
    let i_imgs: BTreeSet<&VertexId> = interface.vertices.values().collect();
    for v in outer.vertex_ids() {
        let (in_a, in_d) = (a_imgs.contains(v), d_imgs.contains(v));
        if !in_a && !in_d {
            return Err(format!("vertex {v} is in neither image"));
        }
        if in_a && in_d != i_imgs.contains(v) {
            return Err(format!("vertex {v} is shared but not an interface image, or vice versa"));
        }
    }
    let a_edges: BTreeSet<&EdgeId> = a.edges.values().collect();
    let d_edges: BTreeSet<&EdgeId> = d.edges.values().collect();
    for e in outer.edge_ids() {
        if a_edges.contains(e) == d_edges.contains(e) {
            return Err(format!("edge {e} is in both images or neither"));
        }
    }
    if a.vertices.len() != a_imgs.len() || !a.is_injective() {
        return Err("map is not injective".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::isomorphic;
    use crate::matching::find_string_matchings;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn identity_rule_on_chain() {
        let r = fixtures::identity_wire_rule();
        let g = fixtures::chain(3);
        let m = find_string_matchings(&r.lhs, &g).next().unwrap();
        let c = pushout_complement(&r, &g, &m).unwrap();
        assert_eq!(c.graph.vertex_count(), 3);
        assert!(!c.graph.contains_edge(&"e1".into()));
        assert!(c.graph.contains_edge(&"e2".into()));
        let t = apply_rewrite(&r, &g, &m, 0).unwrap();
        t.check_squares(&r).unwrap();
        assert!(isomorphic(&t.result, &g));
    }

    #[test]
    fn single_point_rule_keeps_host() {
        let mut p = TypedGraph::default();
        p.add_vertex("p", crate::graph::VertexClass::wire("wire")).unwrap();
        let r = RewriteRule {
            name: "point".into(),
            lhs: p.clone(),
            interface: p.clone(),
            rhs: p.clone(),
            i1: GraphMap::identity(&p),
            i2: GraphMap::identity(&p),
        };
        let g = fixtures::star(2);
        let m = find_string_matchings(&r.lhs, &g).next().unwrap();
        let c = pushout_complement(&r, &g, &m).unwrap();
        assert_eq!(c.graph, g);
    }

    #[test]
    fn cut_rule_splits_chain() {
        let r = fixtures::cut_rule();
        let g = fixtures::chain(4);
        let m = find_string_matchings(&r.lhs, &g).nth(1).unwrap();
        assert_eq!(m.vertices[&v("wa")], v("c2"));
        let t = apply_rewrite(&r, &g, &m, 0).unwrap();
        t.check_squares(&r).unwrap();
        let b = t.result.boundary();
        assert_eq!(b.inputs, [v("c1"), v("c3")].into());
        assert_eq!(b.outputs, [v("c2"), v("c4")].into());
        assert_eq!(t.result.edge_count(), 2);
    }

    #[test]
    fn bad_matching_is_a_usage_error() {
        let r = fixtures::identity_wire_rule();
        let g = fixtures::chain(3);
        let mut m = find_string_matchings(&r.lhs, &g).next().unwrap();
        m.vertices.insert(v("wb"), v("c1"));
        assert!(matches!(pushout_complement(&r, &g, &m), Err(RewriteError::InvalidMatching(_))));
    }
}
