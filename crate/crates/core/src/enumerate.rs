//! Bounded enumeration of the concrete instances of a pattern graph.
//!
//! Every instance is reached by a canonical instantiation: the top-level box
//! with the smallest id is expanded `k` times (copy it, then drop the fresh
//! copy's !-vertex) and then killed; the copies of its nested boxes become
//! top-level and are processed the same way. Only COPY, DROP and KILL occur.
//!
//! Pruning rests on two facts. Σ-vertices in no box are never removed again,
//! so their number only grows along a branch. And a copy whose Σ-contents
//! all disappear later contributes nothing, so it suffices to consider
//! copies that leave at least one Σ-vertex (at least the vertices boxed by
//! `b` alone, when there are any).

use std::collections::{BTreeMap, HashMap};

use crate::graph::{TypedGraph, VertexClass, VertexId};
use crate::iso::{invariant_hash, isomorphic};
use crate::pattern::{InstOp, Instantiation, PatternGraph};

/// Decides whether a partial instantiation can still lead somewhere.
pub trait Prune {
    /// Upper bound on Σ-vertices in a final instance.
    fn bound(&self) -> usize;

    /// Called on every intermediate graph; `false` cuts the branch. Must be
    /// monotone: once a graph is rejected, expanding any box further must
    /// also be rejected.
    fn admits(&self, p: &PatternGraph) -> bool {
        p.unboxed_sigma().count() <= self.bound()
    }
}

/// Plain Σ-vertex bound.
#[derive(Clone, Copy, Debug)]
pub struct SigmaBound(pub usize);

impl Prune for SigmaBound {
    fn bound(&self) -> usize {
        self.0
    }
}

/// Σ-vertex bound plus a cap on the number of vertices of each class.
#[derive(Clone, Debug)]
pub struct KindBudget {
    pub bound: usize,
    pub caps: BTreeMap<VertexClass, usize>,
}

impl KindBudget {
    /// Budget for instances that must fit inside `host`.
    pub fn for_host(host: &TypedGraph, bound: usize) -> Self {
        let mut caps = BTreeMap::new();
        for (_, c) in host.vertices() {
            *caps.entry(c.clone()).or_insert(0) += 1;
        }
        Self { bound, caps }
    }

    pub(crate) fn fits(&self, p: &PatternGraph) -> bool {
        let g = p.graph();
        let mut counts: BTreeMap<&VertexClass, usize> = BTreeMap::new();
        let mut total = 0;
        for v in p.unboxed_sigma() {
            *counts.entry(g.vertex(v).expect("present")).or_insert(0) += 1;
            total += 1;
        }
        total <= self.bound && counts.iter().all(|(c, n)| self.caps.get(*c).is_some_and(|cap| n <= cap))
    }
}

impl Prune for KindBudget {
    fn bound(&self) -> usize {
        self.bound
    }

    fn admits(&self, p: &PatternGraph) -> bool {
        self.fits(p)
    }
}

struct Frame {
    graph: PatternGraph,
    ops: Vec<InstOp>,
}

/// Lazy depth-first stream of canonical instantiations whose concrete
/// result fits the pruning rule. Not deduplicated.
pub struct CanonicalInstantiations<P: Prune> {
    stack: Vec<Frame>,
    prune: P,
}

impl<P: Prune> CanonicalInstantiations<P> {
    pub fn new(p: &PatternGraph, prune: P) -> Self {
        Self { stack: vec![Frame { graph: p.clone(), ops: Vec::new() }], prune }
    }

    fn children(&self, frame: Frame, b: VertexId) -> Vec<Frame> {
        let g = frame.graph.graph();
        let contents = frame.graph.box_contents(&b).expect("bang");
        let sigma_in_box = contents.iter().filter(|v| !g.is_bang(v)).count();
        let exclusive =
            contents.iter().filter(|v| !g.is_bang(v) && g.pred(v).iter().filter(|p| g.is_bang(p)).count() == 1).count();
        let unboxed = frame.graph.unboxed_sigma().count();
        let max_copies =
            if sigma_in_box == 0 { 0 } else { self.prune.bound().saturating_sub(unboxed) / exclusive.max(1) };

        let mut out = Vec::new();
        let mut cur = frame.graph;
        let mut ops = frame.ops;
        for k in 0..=max_copies {
            let killed = cur.kill_box(&b).expect("bang");
            if !self.prune.admits(&killed) {
                break;
            }
            let mut kill_ops = ops.clone();
            kill_ops.push(InstOp::Kill(b.clone()));
            out.push(Frame { graph: killed, ops: kill_ops });
            if k == max_copies {
                break;
            }
            let (copied, map) = cur.copy_box(&b).expect("bang");
            let fresh = map.vertices[&b].clone();
            cur = copied.drop_box(&fresh).expect("fresh bang");
            ops.push(InstOp::Copy { bang: b.clone(), fresh: Some(fresh.clone()) });
            ops.push(InstOp::Drop(fresh));
        }
        out
    }
}

impl<P: Prune> Iterator for CanonicalInstantiations<P> {
    type Item = (PatternGraph, Instantiation);

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(frame) = self.stack.pop() {
            if !self.prune.admits(&frame.graph) {
                continue;
            }
            let Some(b) = frame.graph.top_level_bangs().next().cloned() else {
                return Some((frame.graph, Instantiation::new(frame.ops)));
            };
            let mut children = self.children(frame, b);
            children.reverse();
            self.stack.extend(children);
        }
        None
    }
}

/// Concrete instances with at most `bound` Σ-vertices, one per isomorphism
/// class, each with a witnessing canonical instantiation.
pub struct Instances {
    inner: CanonicalInstantiations<SigmaBound>,
    seen: HashMap<u64, Vec<TypedGraph>>,
}

impl Iterator for Instances {
    type Item = (TypedGraph, Instantiation);

    fn next(&mut self) -> Option<Self::Item> {
        for (p, s) in self.inner.by_ref() {
            let g = p.into_graph();
            let bucket = self.seen.entry(invariant_hash(&g)).or_default();
            if bucket.iter().any(|h| isomorphic(h, &g)) {
                continue;
            }
            bucket.push(g.clone());
            return Some((g, s));
        }
        None
    }
}

pub fn enumerate_instances(p: &PatternGraph, bound: usize) -> Instances {
    Instances { inner: CanonicalInstantiations::new(p, SigmaBound(bound)), seen: HashMap::new() }
}

/// A canonical instantiation turning `p` into a graph isomorphic to `h`, if
/// `h` is an instance of `p`.
pub fn is_instance(p: &PatternGraph, h: &TypedGraph) -> Option<Instantiation> {
    if h.has_bangs() {
        return None;
    }
    let budget = KindBudget::for_host(h, h.sigma_count());
    let target = invariant_hash(h);
    CanonicalInstantiations::new(p, budget)
        .find(|(g, _)| invariant_hash(g.graph()) == target && isomorphic(g.graph(), h))
        .map(|(_, s)| s)
}
