//! String-graph matching and pattern matching.
//!
//! A matching `L -> H` is an injective homomorphism that is full at every
//! node-vertex: the edges around a node map bijectively onto the edges
//! around its image. Wire-vertices carry no such condition, which is what
//! lets a pattern's boundary land in the middle of a host wire.
//!
//! Matching is rigid: a wire made of one wire-vertex does not match a wire
//! made of two. See [`crate::rewriting::normalize_wires`] for the opt-in
//! workaround.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::enumerate::{CanonicalInstantiations, KindBudget, Prune};
use crate::graph::{EdgeId, GraphMap, TypedGraph, VertexId};
use crate::pattern::{Instantiation, PatternGraph};

/// Vertex and edge maps from a pattern-side graph into a host.
pub type Matching = GraphMap;

/// Why a map is not a matching. Only the first problem found is reported.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchDefect {
    #[error("{side} is not a string graph")]
    NotStringGraph { side: &'static str },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("vertices {a} and {b} both map to {image}")]
    VertexCollision { a: VertexId, b: VertexId, image: VertexId },
    #[error("edges {a} and {b} both map to {image}")]
    EdgeCollision { a: EdgeId, b: EdgeId, image: EdgeId },
    #[error("node {node} has {pattern} incident edges, its image {image} has {host}")]
    NotFull { node: VertexId, image: VertexId, pattern: usize, host: usize },
}

/// Check that `m` is a matching of `l` into `h`.
pub fn verify_matching(l: &TypedGraph, h: &TypedGraph, m: &Matching) -> Result<(), MatchDefect> {
    if l.is_string_graph() != Ok(true) {
        return Err(MatchDefect::NotStringGraph { side: "pattern" });
    }
    if h.is_string_graph() != Ok(true) {
        return Err(MatchDefect::NotStringGraph { side: "host" });
    }
    m.check_homomorphism(l, h).map_err(MatchDefect::NotHomomorphism)?;
    let mut seen: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
    for v in l.vertex_ids() {
        let image = &m.vertices[v];
        if let Some(a) = seen.insert(image, v) {
            return Err(MatchDefect::VertexCollision { a: a.clone(), b: v.clone(), image: image.clone() });
        }
    }
    let mut seen: BTreeMap<&EdgeId, &EdgeId> = BTreeMap::new();
    for e in l.edge_ids() {
        let image = &m.edges[e];
        if let Some(a) = seen.insert(image, e) {
            return Err(MatchDefect::EdgeCollision { a: a.clone(), b: e.clone(), image: image.clone() });
        }
    }
    // Injective and structure-preserving, so the edges at a node already
    // map injectively to the edges at its image; equal counts make it a
    // bijection.
    for n in l.node_vertices() {
        let image = &m.vertices[n];
        let (lin, lout) = (l.in_degree(n), l.out_degree(n));
        let (hin, hout) = (h.in_degree(image), h.out_degree(image));
        if lin != hin || lout != hout {
            return Err(MatchDefect::NotFull {
                node: n.clone(),
                image: image.clone(),
                pattern: lin + lout,
                host: hin + hout,
            });
        }
    }
    Ok(())
}

/// Search order for the pattern side. Each vertex after the first of its
/// component has an anchor: an earlier vertex and the edge joining them,
/// which narrows its candidates to one host neighbour per anchor edge.
struct Plan {
    order: Vec<VertexId>,
    // (anchor position, edge, anchor is the edge's source)
    anchors: Vec<Option<(usize, EdgeId, bool)>>,
    // Edges to map when placing the vertex at this position: those whose
    // other endpoint is placed at or before it.
    closing: Vec<Vec<EdgeId>>,
}

impl Plan {
    fn new(l: &TypedGraph) -> Self {
        let mut roots: Vec<&VertexId> = l.node_vertices().collect();
        roots.sort_by_key(|n| std::cmp::Reverse(l.in_degree(n) + l.out_degree(n)));
        roots.extend(l.vertex_ids().filter(|v| !l.is_node(v)));

        let mut pos: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut order = Vec::new();
        let mut anchors = Vec::new();
        for root in roots {
            if pos.contains_key(root) {
                continue;
            }
            pos.insert(root.clone(), order.len());
            order.push(root.clone());
            anchors.push(None);
            let mut i = order.len() - 1;
            while i < order.len() {
                let v = order[i].clone();
                for e in l.out_edges(&v).chain(l.in_edges(&v)) {
                    let edge = l.edge(e).expect("present");
                    let (other, v_is_src) = if edge.src == v { (&edge.tgt, true) } else { (&edge.src, false) };
                    if !pos.contains_key(other) {
                        pos.insert(other.clone(), order.len());
                        order.push(other.clone());
                        anchors.push(Some((i, e.clone(), v_is_src)));
                    }
                }
                i += 1;
            }
        }

        let mut closing = vec![Vec::new(); order.len()];
        for (e, edge) in l.edges() {
            let last = pos[&edge.src].max(pos[&edge.tgt]);
            closing[last].push(e.clone());
        }
        Self { order, anchors, closing }
    }
}

struct Level {
    candidates: Vec<VertexId>,
    next: usize,
    placed: Option<(VertexId, Vec<EdgeId>)>,
}

/// Lazy, deterministic stream of injective homomorphisms `l -> h`, full at
/// node-vertices when `full` is set.
pub struct StringMatchings<'h> {
    l: TypedGraph,
    h: &'h TypedGraph,
    full: bool,
    plan: Plan,
    stack: Vec<Level>,
    vmap: BTreeMap<VertexId, VertexId>,
    emap: BTreeMap<EdgeId, EdgeId>,
    used_v: BTreeSet<VertexId>,
    used_e: BTreeSet<EdgeId>,
    started: bool,
}

impl<'h> StringMatchings<'h> {
    fn new(l: &TypedGraph, h: &'h TypedGraph, full: bool) -> Self {
        Self {
            plan: Plan::new(l),
            l: l.clone(),
            h,
            full,
            stack: Vec::new(),
            vmap: BTreeMap::new(),
            emap: BTreeMap::new(),
            used_v: BTreeSet::new(),
            used_e: BTreeSet::new(),
            started: false,
        }
    }

    fn candidates(&self, depth: usize) -> Vec<VertexId> {
        let v = &self.plan.order[depth];
        let class = self.l.vertex(v).expect("present");
        match &self.plan.anchors[depth] {
            Some((a, _, anchor_is_src)) => {
                let image = &self.vmap[&self.plan.order[*a]];
                let mut out: Vec<VertexId> = if *anchor_is_src {
                    self.h.out_edges(image).map(|e| self.h.tgt(e).expect("present").clone()).collect()
                } else {
                    self.h.in_edges(image).map(|e| self.h.src(e).expect("present").clone()).collect()
                };
                out.sort();
                out.dedup();
                out.retain(|c| self.h.vertex(c) == Some(class));
                out
            }
            None => self.h.vertices().filter(|(_, c)| *c == class).map(|(v, _)| v.clone()).collect(),
        }
    }

    /// Try to place the vertex at `depth` on `c`, returning the host edges
    /// chosen for the pattern edges it closes.
    fn try_place(&self, depth: usize, c: &VertexId) -> Option<Vec<EdgeId>> {
        let v = &self.plan.order[depth];
        if self.used_v.contains(c) {
            return None;
        }
        let (lin, lout) = (self.l.in_degree(v), self.l.out_degree(v));
        let (hin, hout) = (self.h.in_degree(c), self.h.out_degree(c));
        let degrees_ok =
            if self.full && self.l.is_node(v) { lin == hin && lout == hout } else { lin <= hin && lout <= hout };
        if !degrees_ok {
            return None;
        }
        let image = |u: &VertexId| if u == v { Some(c) } else { self.vmap.get(u) };
        let mut chosen: Vec<EdgeId> = Vec::new();
        for e in &self.plan.closing[depth] {
            let edge = self.l.edge(e).expect("present");
            let (s, t) = (image(&edge.src)?, image(&edge.tgt)?);
            let f = self.h.edges_between(s, t).find(|f| !self.used_e.contains(*f) && !chosen.contains(f))?.clone();
            chosen.push(f);
        }
        Some(chosen)
    }

    fn unplace(&mut self, depth: usize) {
        if let Some((c, edges)) = self.stack[depth].placed.take() {
            self.vmap.remove(&self.plan.order[depth]);
            self.used_v.remove(&c);
            for (e, f) in self.plan.closing[depth].iter().zip(edges) {
                self.emap.remove(e);
                self.used_e.remove(&f);
            }
        }
    }

    fn current(&self) -> Matching {
        GraphMap { vertices: self.vmap.clone(), edges: self.emap.clone() }
    }
}

impl Iterator for StringMatchings<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if !self.started {
            self.started = true;
            if self.plan.order.is_empty() {
                return Some(Matching::default());
            }
            let candidates = self.candidates(0);
            self.stack.push(Level { candidates, next: 0, placed: None });
        }
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            self.unplace(depth);
            let level = &self.stack[depth];
            let mut found = None;
            let mut next = level.next;
            while next < level.candidates.len() {
                let c = &level.candidates[next];
                next += 1;
                if let Some(edges) = self.try_place(depth, c) {
                    found = Some((c.clone(), edges));
                    break;
                }
            }
            self.stack[depth].next = next;
            let Some((c, edges)) = found else {
                self.stack.pop();
                continue;
            };
            self.vmap.insert(self.plan.order[depth].clone(), c.clone());
            self.used_v.insert(c.clone());
            for (e, f) in self.plan.closing[depth].iter().zip(&edges) {
                self.emap.insert(e.clone(), f.clone());
                self.used_e.insert(f.clone());
            }
            self.stack[depth].placed = Some((c, edges));
            if depth + 1 == self.plan.order.len() {
                return Some(self.current());
            }
            let candidates = self.candidates(depth + 1);
            self.stack.push(Level { candidates, next: 0, placed: None });
        }
    }
}

/// All matchings of `l` into `h`, in a deterministic order.
pub fn find_string_matchings<'h>(l: &TypedGraph, h: &'h TypedGraph) -> StringMatchings<'h> {
    StringMatchings::new(l, h, true)
}

/// Whether `l` embeds in `h` at all, ignoring node-fullness.
pub(crate) fn embeds(l: &TypedGraph, h: &TypedGraph) -> bool {
    StringMatchings::new(l, h, false).next().is_some()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MatchConfig {
    /// Largest instance considered, in Σ-vertices. Defaults to the host's.
    pub max_sigma_bound: Option<usize>,
}

/// A matching of some instance of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatch {
    pub instantiation: Instantiation,
    pub instance: TypedGraph,
    pub matching: Matching,
}

/// Prunes instantiation branches whose fixed part can no longer fit in the
/// host: too many vertices of some class, or the unboxed Σ-part (which
/// only grows) has no injective image.
struct HostPrune<'h> {
    budget: KindBudget,
    host: &'h TypedGraph,
}

impl Prune for HostPrune<'_> {
    fn bound(&self) -> usize {
        self.budget.bound
    }

    fn admits(&self, p: &PatternGraph) -> bool {
        if !self.budget.fits(p) {
            return false;
        }
        let fixed = p.graph().full_subgraph(p.unboxed_sigma());
        embeds(&fixed, self.host)
    }
}

/// Lazy stream of pattern matches, grouped by instantiation in canonical
/// order. Symmetric matches are all reported.
pub struct PatternMatches<'h> {
    instantiations: CanonicalInstantiations<HostPrune<'h>>,
    host: &'h TypedGraph,
    current: Option<(Instantiation, TypedGraph, StringMatchings<'h>)>,
}

impl Iterator for PatternMatches<'_> {
    type Item = PatternMatch;

    fn next(&mut self) -> Option<PatternMatch> {
        loop {
            if let Some((s, g, ms)) = &mut self.current {
                if let Some(m) = ms.next() {
                    return Some(PatternMatch { instantiation: s.clone(), instance: g.clone(), matching: m });
                }
            }
            let (p, s) = self.instantiations.next()?;
            let g = p.into_graph();
            let ms = find_string_matchings(&g, self.host);
            self.current = Some((s, g, ms));
        }
    }
}

pub fn find_pattern_matchings<'h>(p: &PatternGraph, h: &'h TypedGraph, config: MatchConfig) -> PatternMatches<'h> {
    let bound = config.max_sigma_bound.unwrap_or_else(|| h.sigma_count());
    let prune = HostPrune { budget: KindBudget::for_host(h, bound), host: h };
    PatternMatches { instantiations: CanonicalInstantiations::new(p, prune), host: h, current: None }
}
