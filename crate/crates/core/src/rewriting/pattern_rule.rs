use std::collections::BTreeSet;

use crate::graph::{GraphError, GraphMap, TypedGraph, VertexClass, VertexId};
use crate::matching::{find_pattern_matchings, MatchConfig, PatternMatch, PatternMatches};
use crate::pattern::{contents_of, validate_pattern, InstOp, Instantiation, PatternError, PatternGraph};

use super::rule::{check_directions, check_leg, validate_rule};
use super::{apply_rewrite, DpoTrace, RewriteError, RewriteRule, RuleViolation, Side};

/// A span `L <- I -> R` of pattern graphs: a rewrite rule whose boxes
/// are shared through the interface, standing for a whole family of
/// concrete rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritePattern {
    pub name: String,
    pub lhs: PatternGraph,
    pub interface: PatternGraph,
    pub rhs: PatternGraph,
    pub i1: GraphMap,
    pub i2: GraphMap,
}

/// β(i) is an isomorphism β(I) -> β(G): bijective on !-vertices and on the
/// edges between them. Assumes `i` is an injective homomorphism.
fn check_bang_iso(side: Side, interface: &TypedGraph, g: &TypedGraph, map: &GraphMap, out: &mut Vec<RuleViolation>) {
    let images: BTreeSet<&VertexId> = interface.bang_vertices().map(|b| &map.vertices[b]).collect();
    if let Some(b) = g.bang_vertices().find(|b| !images.contains(b)) {
        out.push(RuleViolation::BangsNotIsomorphic { side, detail: format!("{b} has no preimage") });
        return;
    }
    let count = |h: &TypedGraph| h.edges().filter(|(_, e)| h.is_bang(&e.src) && h.is_bang(&e.tgt)).count();
    if count(interface) != count(g) {
        out.push(RuleViolation::BangsNotIsomorphic { side, detail: "nesting edges differ".into() });
    }
}

/// For each interface box `B(b)`, its preimage under the leg must be
/// exactly `B(b)`.
fn check_preimages(side: Side, interface: &TypedGraph, g: &TypedGraph, map: &GraphMap, out: &mut Vec<RuleViolation>) {
    for b in interface.bang_vertices() {
        let Some(image) = map.vertices.get(b).filter(|x| g.is_bang(x)) else {
            continue;
        };
        let target = contents_of(g, image);
        let preimage: BTreeSet<VertexId> = interface
            .vertex_ids()
            .filter(|x| map.vertices.get(*x).is_some_and(|y| target.contains(y)))
            .cloned()
            .collect();
        if preimage != contents_of(interface, b) {
            out.push(RuleViolation::BoxPreimage { side, bang: b.clone() });
        }
    }
}

/// Everything wrong with `rp` as a rewrite pattern; empty when valid.
pub fn validate_rewrite_pattern(rp: &RewritePattern) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for (side, p) in [(Side::Lhs, &rp.lhs), (Side::Interface, &rp.interface), (Side::Rhs, &rp.rhs)] {
        let violations = validate_pattern(p.graph());
        if !violations.is_empty() {
            out.push(RuleViolation::InvalidPattern { side, violations });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let (i, l, r) = (rp.interface.graph(), rp.lhs.graph(), rp.rhs.graph());
    if !rp.interface.sigma().is_point_graph() {
        out.push(RuleViolation::InterfaceNotPointGraph);
        return out;
    }
    // Box membership first: a point boxed on one side only also breaks the
    // leg as a homomorphism, but this is the more useful diagnosis.
    check_preimages(Side::Lhs, i, l, &rp.i1, &mut out);
    check_preimages(Side::Rhs, i, r, &rp.i2, &mut out);
    if !out.is_empty() {
        return out;
    }
    let ok1 = check_leg(Side::Lhs, i, l, &rp.i1, &mut out);
    let ok2 = check_leg(Side::Rhs, i, r, &rp.i2, &mut out);
    if !(ok1 && ok2) {
        return out;
    }
    check_directions(i, l, r, &rp.i1, &rp.i2, &mut out);
    check_bang_iso(Side::Lhs, i, l, &rp.i1, &mut out);
    check_bang_iso(Side::Rhs, i, r, &rp.i2, &mut out);
    if out.is_empty() {
        out.extend(validate_rule(&rp.strip_boxes()).into_iter().map(|v| RuleViolation::Stripped(Box::new(v))));
    }
    out
}

/// Per-side maps from the old graphs to the new ones after a pattern op.
struct OpMaps {
    interface: GraphMap,
    lhs: GraphMap,
}

fn side<T>(side: Side, r: Result<T, PatternError>) -> Result<T, RewriteError> {
    r.map_err(|source| RewriteError::Side { side, source })
}

/// `new_i(q_I(x)) = q_G(i(x))` for every element the maps keep.
fn induced(old: &GraphMap, q_interface: &GraphMap, q_side: &GraphMap) -> GraphMap {
    let mut out = GraphMap::default();
    for (x, y) in &old.vertices {
        if let (Some(a), Some(b)) = (q_interface.vertices.get(x), q_side.vertices.get(y)) {
            out.vertices.insert(a.clone(), b.clone());
        }
    }
    for (x, y) in &old.edges {
        if let (Some(a), Some(b)) = (q_interface.edges.get(x), q_side.edges.get(y)) {
            out.edges.insert(a.clone(), b.clone());
        }
    }
    out
}

impl RewritePattern {
    /// Build a rewrite pattern from its two sides and the correspondences
    /// between them: `points` lists `(interface point, lhs vertex, rhs
    /// vertex)` and `boxes` lists `(lhs bang, rhs bang)`. The interface gets
    /// one !-vertex per box pair, named after the left-hand one, holding
    /// the points whose left-hand image it holds. Edge ids are borrowed
    /// from the left-hand side. The result is not validated.
    pub fn from_span(
        name: impl Into<String>,
        lhs: PatternGraph,
        rhs: PatternGraph,
        points: &[(VertexId, VertexId, VertexId)],
        boxes: &[(VertexId, VertexId)],
    ) -> Result<RewritePattern, RewriteError> {
        let (l, r) = (lhs.graph(), rhs.graph());
        let mut i = TypedGraph::new(l.signature().merged(r.signature()));
        let mut i1 = GraphMap::default();
        let mut i2 = GraphMap::default();
        for (p, lv, rv) in points {
            let class = l.vertex(lv).ok_or_else(|| GraphError::UnknownVertex(lv.clone()))?;
            if !r.contains_vertex(rv) {
                return Err(GraphError::UnknownVertex(rv.clone()).into());
            }
            i.add_vertex(p.clone(), class.clone())?;
            i1.vertices.insert(p.clone(), lv.clone());
            i2.vertices.insert(p.clone(), rv.clone());
        }
        for (lb, rb) in boxes {
            for (g, b) in [(l, lb), (r, rb)] {
                if !g.is_bang(b) {
                    return Err(RewriteError::UnknownBang(b.clone()));
                }
            }
            i.add_vertex(lb.clone(), VertexClass::Bang)?;
            i1.vertices.insert(lb.clone(), lb.clone());
            i2.vertices.insert(lb.clone(), rb.clone());
        }
        let preimage = i1.inverse();
        for (e, edge) in l.edges() {
            if !l.is_bang(&edge.src) {
                continue;
            }
            let (Some(s), Some(t)) = (preimage.vertices.get(&edge.src), preimage.vertices.get(&edge.tgt)) else {
                continue;
            };
            i.add_edge(e.clone(), s.clone(), t.clone())?;
            i1.edges.insert(e.clone(), e.clone());
            if let Some(f) = r.edges_between(&i2.vertices[s], &i2.vertices[t]).next() {
                i2.edges.insert(e.clone(), f.clone());
            }
        }
        let interface = PatternGraph::new(i).map_err(|source| RewriteError::Side { side: Side::Interface, source })?;
        Ok(RewritePattern { name: name.into(), lhs, interface, rhs, i1, i2 })
    }

    /// The rewrite rule obtained by forgetting every box.
    pub fn strip_boxes(&self) -> RewriteRule {
        let interface = self.interface.strip_boxes();
        RewriteRule {
            name: self.name.clone(),
            lhs: self.lhs.strip_boxes(),
            rhs: self.rhs.strip_boxes(),
            i1: self.i1.restrict(&interface),
            i2: self.i2.restrict(&interface),
            interface,
        }
    }

    /// The !-vertex of the given side corresponding to interface !-vertex `b`.
    pub fn bang_on(&self, side: Side, b: &VertexId) -> Result<VertexId, RewriteError> {
        if !self.interface.graph().is_bang(b) {
            return Err(RewriteError::UnknownBang(b.clone()));
        }
        Ok(match side {
            Side::Lhs => self.i1.vertices[b].clone(),
            Side::Interface => b.clone(),
            Side::Rhs => self.i2.vertices[b].clone(),
        })
    }

    /// Apply a !-box operation, addressed by interface !-vertex ids, to all
    /// three graphs at once (PCOPY, PDROP, PKILL, PMERGE).
    pub fn pattern_op(&self, op: &InstOp) -> Result<RewritePattern, RewriteError> {
        Ok(self.pattern_op_traced(op)?.0)
    }

    fn pattern_op_traced(&self, op: &InstOp) -> Result<(RewritePattern, OpMaps), RewriteError> {
        let on_side = |s: Side| -> Result<InstOp, RewriteError> {
            Ok(match op {
                InstOp::Copy { bang, fresh } => InstOp::Copy {
                    bang: self.bang_on(s, bang)?,
                    fresh: if s == Side::Interface { fresh.clone() } else { None },
                },
                InstOp::Drop(b) => InstOp::Drop(self.bang_on(s, b)?),
                InstOp::Kill(b) => InstOp::Kill(self.bang_on(s, b)?),
                InstOp::Merge(a, b) => InstOp::Merge(self.bang_on(s, a)?, self.bang_on(s, b)?),
            })
        };
        let (interface, qi) = side(Side::Interface, self.interface.apply_with_map(&on_side(Side::Interface)?))?;
        let (lhs, ql) = side(Side::Lhs, self.lhs.apply_with_map(&on_side(Side::Lhs)?))?;
        let (rhs, qr) = side(Side::Rhs, self.rhs.apply_with_map(&on_side(Side::Rhs)?))?;

        let (i1, i2) = if let InstOp::Copy { .. } = op {
            // The first copy keeps every id; add the second copy's images.
            let mut i1 = self.i1.clone();
            let mut i2 = self.i2.clone();
            let add = |acc: &mut GraphMap, extra: GraphMap| {
                acc.vertices.extend(extra.vertices);
                acc.edges.extend(extra.edges);
            };
            add(&mut i1, induced(&self.i1, &qi, &ql));
            add(&mut i2, induced(&self.i2, &qi, &qr));
            (i1, i2)
        } else {
            (induced(&self.i1, &qi, &ql), induced(&self.i2, &qi, &qr))
        };
        let next = RewritePattern { name: self.name.clone(), lhs, interface, rhs, i1, i2 };
        Ok((next, OpMaps { interface: qi, lhs: ql }))
    }

    /// Replay an interface-addressed instantiation to the end and return
    /// the resulting concrete rule.
    pub fn instantiate(&self, s: &Instantiation) -> Result<RewriteRule, RewriteError> {
        let mut cur = self.clone();
        for (index, op) in s.ops().iter().enumerate() {
            cur = cur.pattern_op(op).map_err(|e| RewriteError::Step {
                index,
                op: op.to_string(),
                source: Box::new(e),
            })?;
        }
        cur.into_rule()
    }

    fn into_rule(self) -> Result<RewriteRule, RewriteError> {
        let left: Vec<VertexId> = self.interface.bangs().cloned().collect();
        if !left.is_empty() {
            return Err(RewriteError::Incomplete(left));
        }
        Ok(RewriteRule {
            name: self.name,
            lhs: self.lhs.into_graph(),
            interface: self.interface.into_graph(),
            rhs: self.rhs.into_graph(),
            i1: self.i1,
            i2: self.i2,
        })
    }

    /// Translate an instantiation of the left-hand pattern into the
    /// equivalent interface-addressed one. Also returns the rewrite pattern
    /// reached, whose left-hand side is the left-hand instance.
    pub fn translate_lhs(&self, s: &Instantiation) -> Result<(RewritePattern, Instantiation), RewriteError> {
        let mut cur = self.clone();
        let mut out = Instantiation::default();
        for (index, op) in s.ops().iter().enumerate() {
            let step = |e| RewriteError::Step { index, op: op.to_string(), source: Box::new(e) };
            let inverse = cur.i1.inverse();
            let to_i = |b: &VertexId| -> Result<VertexId, RewriteError> {
                inverse
                    .vertices
                    .get(b)
                    .filter(|x| cur.interface.graph().is_bang(x))
                    .cloned()
                    .ok_or_else(|| RewriteError::UnknownBang(b.clone()))
            };
            let translated = match op {
                InstOp::Copy { bang, .. } => InstOp::Copy { bang: to_i(bang).map_err(step)?, fresh: None },
                InstOp::Drop(b) => InstOp::Drop(to_i(b).map_err(step)?),
                InstOp::Kill(b) => InstOp::Kill(to_i(b).map_err(step)?),
                InstOp::Merge(a, b) => InstOp::Merge(to_i(a).map_err(step)?, to_i(b).map_err(step)?),
            };
            let (next, maps) = cur.pattern_op_traced(&translated).map_err(step)?;
            let recorded = match (op, translated) {
                (InstOp::Copy { bang: lb, fresh }, InstOp::Copy { bang, .. }) => {
                    let actual = &maps.lhs.vertices[lb];
                    if let Some(expected) = fresh {
                        if expected != actual {
                            return Err(step(RewriteError::Side {
                                side: Side::Lhs,
                                source: PatternError::FreshNameMismatch {
                                    bang: lb.clone(),
                                    expected: expected.clone(),
                                    actual: actual.clone(),
                                },
                            }));
                        }
                    }
                    let fresh = maps.interface.vertices[&bang].clone();
                    InstOp::Copy { bang, fresh: Some(fresh) }
                }
                (_, t) => t,
            };
            out.push(recorded);
            cur = next;
        }
        Ok((cur, out))
    }

    /// Rewrite `h` at every match of the left-hand pattern, lazily.
    pub fn rewrite<'h>(&'h self, h: &'h TypedGraph, step: usize) -> RewriteResults<'h> {
        RewriteResults {
            rp: self,
            host: h,
            step,
            matches: find_pattern_matchings(&self.lhs, h, MatchConfig::default()),
        }
    }
}

/// Lazy stream of `(match, trace)` pairs from [`rewrite_with_pattern`].
pub struct RewriteResults<'h> {
    rp: &'h RewritePattern,
    host: &'h TypedGraph,
    step: usize,
    matches: PatternMatches<'h>,
}

impl Iterator for RewriteResults<'_> {
    type Item = Result<(PatternMatch, DpoTrace), RewriteError>;

    fn next(&mut self) -> Option<Self::Item> {
        let pm = self.matches.next()?;
        Some(self.apply(pm))
    }
}

impl RewriteResults<'_> {
    fn apply(&self, pm: PatternMatch) -> Result<(PatternMatch, DpoTrace), RewriteError> {
        let (reached, _) = self.rp.translate_lhs(&pm.instantiation)?;
        let rule = reached.into_rule()?;
        if rule.lhs != pm.instance {
            return Err(RewriteError::InstanceMismatch);
        }
        let trace = apply_rewrite(&rule, self.host, &pm.matching, self.step)?;
        Ok((pm, trace))
    }
}

/// Every rewrite of `h` by an instance of `rp`, in match order. `step`
/// only feeds the naming of fresh vertices.
pub fn rewrite_with_pattern<'h>(rp: &'h RewritePattern, h: &'h TypedGraph, step: usize) -> RewriteResults<'h> {
    rp.rewrite(h, step)
}
