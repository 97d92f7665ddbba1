use std::collections::BTreeSet;

use crate::graph::{GraphMap, TypedGraph, VertexId};

use super::{RuleViolation, Side};

/// A span `L <- I -> R` of string graphs with `I` a point graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: TypedGraph,
    pub interface: TypedGraph,
    pub rhs: TypedGraph,
    pub i1: GraphMap,
    pub i2: GraphMap,
}

/// Check one leg `I -> G`: a homomorphism, injective, and a bijection from
/// the Σ-points of `I` onto the boundary of `G`.
pub(super) fn check_leg(
    side: Side,
    interface: &TypedGraph,
    g: &TypedGraph,
    map: &GraphMap,
    out: &mut Vec<RuleViolation>,
) -> bool {
    if let Err(detail) = map.check_homomorphism(interface, g) {
        out.push(RuleViolation::NotHomomorphism { side, detail });
        return false;
    }
    let restricted = map.restrict(interface);
    if !restricted.is_injective() {
        out.push(RuleViolation::NotInjective(side));
        return false;
    }
    let boundary = g.boundary().all();
    let mut hit = BTreeSet::new();
    for p in interface.sigma_vertices() {
        let image = &map.vertices[p];
        if !boundary.contains(image) {
            out.push(RuleViolation::NotOnBoundary { side, point: p.clone(), vertex: image.clone() });
        }
        hit.insert(image.clone());
    }
    for b in boundary.difference(&hit) {
        out.push(RuleViolation::BoundaryMissed { side, vertex: b.clone() });
    }
    true
}

pub(super) fn check_directions(
    interface: &TypedGraph,
    lhs: &TypedGraph,
    rhs: &TypedGraph,
    i1: &GraphMap,
    i2: &GraphMap,
    out: &mut Vec<RuleViolation>,
) {
    for p in interface.sigma_vertices() {
        let (l, r): (&VertexId, &VertexId) = (&i1.vertices[p], &i2.vertices[p]);
        if lhs.is_input(l) != rhs.is_input(r) {
            out.push(RuleViolation::DirectionMismatch { point: p.clone(), input: true });
        }
        if lhs.is_output(l) != rhs.is_output(r) {
            out.push(RuleViolation::DirectionMismatch { point: p.clone(), input: false });
        }
    }
}

/// Everything wrong with `r` as a rewrite rule; empty when valid.
pub fn validate_rule(r: &RewriteRule) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for (side, g) in [(Side::Lhs, &r.lhs), (Side::Rhs, &r.rhs)] {
        if g.is_string_graph() != Ok(true) || g.has_bangs() {
            out.push(RuleViolation::NotStringGraph(side));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if !r.interface.is_point_graph() || r.interface.has_bangs() {
        out.push(RuleViolation::InterfaceNotPointGraph);
        return out;
    }
    let ok1 = check_leg(Side::Lhs, &r.interface, &r.lhs, &r.i1, &mut out);
    let ok2 = check_leg(Side::Rhs, &r.interface, &r.rhs, &r.i2, &mut out);
    if ok1 && ok2 {
        check_directions(&r.interface, &r.lhs, &r.rhs, &r.i1, &r.i2, &mut out);
    }
    out
}
