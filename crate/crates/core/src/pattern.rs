//! Pattern graphs: string graphs decorated with !-boxes, and the four !-box
//! operations used to instantiate them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{join, GraphError, GraphMap, Subgraph, TypedGraph, TypingViolation, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a pattern graph: {}", join(.0))]
    Invalid(Vec<PatternViolation>),
    #[error("{0} is not a !-vertex of the pattern")]
    UnknownBang(VertexId),
    #[error("cannot merge {b} and {b2}: {clause}")]
    MergePrecondition { b: VertexId, b2: VertexId, clause: MergeClause },
    #[error("instantiation step {index} ({op}) failed: {source}")]
    Step {
        index: usize,
        op: InstOp,
        #[source]
        source: Box<PatternError>,
    },
    #[error("copy of {bang} produced {actual}, but the record says {expected}")]
    FreshNameMismatch { bang: VertexId, expected: VertexId, actual: VertexId },
}

/// Which clause of the MERGE precondition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeClause {
    SameVertex,
    ParentsDiffer,
    BoxesOverlap,
}

impl fmt::Display for MergeClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeClause::SameVertex => "a !-vertex cannot be merged with itself",
            MergeClause::ParentsDiffer => "parent sets differ",
            MergeClause::BoxesOverlap => "boxes are not disjoint",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternViolation {
    Typing(TypingViolation),
    /// Σ(G) has a wire-vertex with more than one in- or out-edge.
    SigmaNotStringGraph {
        vertex: VertexId,
    },
    /// Two edges between the same pair of !-vertices, or repeated
    /// membership edges from a !-vertex.
    NotSimple {
        src: VertexId,
        tgt: VertexId,
    },
    /// A cycle through distinct !-vertices.
    NotAntisymmetric {
        a: VertexId,
        b: VertexId,
    },
    /// `a -> b -> c` without `a -> c`.
    NotTransitive {
        a: VertexId,
        b: VertexId,
        c: VertexId,
    },
    /// B(bang) is not an open subgraph; `vertex` becomes a new input or
    /// output when it is removed.
    NotOpen {
        bang: VertexId,
        vertex: VertexId,
    },
    /// `inner` is in B(outer) but B(inner) ⊄ B(outer); `vertex` witnesses it.
    NotNested {
        outer: VertexId,
        inner: VertexId,
        vertex: VertexId,
    },
}

impl fmt::Display for PatternViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternViolation::Typing(t) => t.fmt(f),
            PatternViolation::SigmaNotStringGraph { vertex } => {
                write!(f, "wire-vertex {vertex} has more than one in- or out-edge")
            }
            PatternViolation::NotSimple { src, tgt } => {
                write!(f, "more than one edge from !-vertex {src} to {tgt}")
            }
            PatternViolation::NotAntisymmetric { a, b } => {
                write!(f, "!-vertices {a} and {b} contain each other")
            }
            PatternViolation::NotTransitive { a, b, c } => {
                write!(f, "!-edges {a}->{b}->{c} without {a}->{c}")
            }
            PatternViolation::NotOpen { bang, vertex } => {
                write!(f, "box of {bang} is not open: removing it exposes {vertex}")
            }
            PatternViolation::NotNested { outer, inner, vertex } => {
                write!(f, "{inner} is in the box of {outer} but its content {vertex} is not")
            }
        }
    }
}

/// Check the four pattern-graph conditions. An empty result means `g` is a
/// pattern graph.
pub fn validate_pattern(g: &TypedGraph) -> Vec<PatternViolation> {
    let typing = g.validate_typing();
    if !typing.is_empty() {
        return typing.into_iter().map(PatternViolation::Typing).collect();
    }
    let mut out = Vec::new();

    for w in g.wire_vertices() {
        if g.sigma_in_degree(w) > 1 || g.sigma_out_degree(w) > 1 {
            out.push(PatternViolation::SigmaNotStringGraph { vertex: w.clone() });
        }
    }

    let bangs: Vec<&VertexId> = g.bang_vertices().collect();
    for b in &bangs {
        let mut seen = BTreeSet::new();
        for e in g.out_edges(b) {
            let t = g.tgt(e).expect("typed");
            if !seen.insert(t) {
                out.push(PatternViolation::NotSimple { src: (*b).clone(), tgt: t.clone() });
            }
        }
    }
    for (i, a) in bangs.iter().enumerate() {
        let sa = g.succ(a);
        for b in &bangs[i + 1..] {
            if sa.contains(*b) && g.succ(b).contains(*a) {
                out.push(PatternViolation::NotAntisymmetric { a: (*a).clone(), b: (*b).clone() });
            }
        }
    }
    for a in &bangs {
        let sa = g.succ(a);
        for b in sa.iter().filter(|b| g.is_bang(b)) {
            for c in g.succ(b).iter().filter(|c| g.is_bang(c)) {
                if c != *a && !sa.contains(c) {
                    out.push(PatternViolation::NotTransitive { a: (*a).clone(), b: b.clone(), c: c.clone() });
                }
            }
        }
    }

    for b in &bangs {
        let contents = contents_of(g, b);
        if let Some(vertex) = first_exposed(g, &contents) {
            out.push(PatternViolation::NotOpen { bang: (*b).clone(), vertex });
        }
        for inner in contents.iter().filter(|v| *v != *b && g.is_bang(v)) {
            if let Some(v) = contents_of(g, inner).iter().find(|v| !contents.contains(*v)) {
                out.push(PatternViolation::NotNested { outer: (*b).clone(), inner: inner.clone(), vertex: v.clone() });
            }
        }
    }
    out
}

pub(crate) fn contents_of(g: &TypedGraph, b: &VertexId) -> BTreeSet<VertexId> {
    let mut s = g.succ(b);
    s.insert(b.clone());
    s
}

/// A wire-vertex outside `removed` that would become a new input or output.
fn first_exposed(g: &TypedGraph, removed: &BTreeSet<VertexId>) -> Option<VertexId> {
    g.wire_vertices()
        .filter(|w| !removed.contains(*w))
        .find(|w| {
            let src: Vec<_> = g.in_edges(w).filter_map(|e| g.src(e)).filter(|s| !g.is_bang(s)).collect();
            let tgt: Vec<_> = g.out_edges(w).filter_map(|e| g.tgt(e)).filter(|t| !g.is_bang(t)).collect();
            (!src.is_empty() && src.iter().all(|s| removed.contains(*s)))
                || (!tgt.is_empty() && tgt.iter().all(|t| removed.contains(*t)))
        })
        .cloned()
}

/// Relationship between two distinct !-vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxRelation {
    /// The first box has an edge to the second.
    FirstContainsSecond,
    SecondContainsFirst,
    Overlapping,
    Disjoint,
}

/// A validated pattern graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    graph: TypedGraph,
}

impl PatternGraph {
    pub fn new(graph: TypedGraph) -> Result<Self, PatternError> {
        let v = validate_pattern(&graph);
        if v.is_empty() {
            Ok(Self { graph })
        } else {
            Err(PatternError::Invalid(v))
        }
    }

    /// Wrap a graph already known to be a pattern graph. Debug builds
    /// re-check.
    pub(crate) fn trusted(graph: TypedGraph) -> Self {
        debug_assert!(validate_pattern(&graph).is_empty(), "{:?}", validate_pattern(&graph));
        Self { graph }
    }

    pub fn graph(&self) -> &TypedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> TypedGraph {
        self.graph
    }

    /// No !-vertices left.
    pub fn is_concrete(&self) -> bool {
        !self.graph.has_bangs()
    }

    pub fn bangs(&self) -> impl Iterator<Item = &VertexId> {
        self.graph.bang_vertices()
    }

    fn require_bang(&self, b: &VertexId) -> Result<(), PatternError> {
        if self.graph.is_bang(b) {
            Ok(())
        } else {
            Err(PatternError::UnknownBang(b.clone()))
        }
    }

    /// B(b): `b` together with all its successors.
    pub fn box_contents(&self, b: &VertexId) -> Result<BTreeSet<VertexId>, PatternError> {
        self.require_bang(b)?;
        Ok(contents_of(&self.graph, b))
    }

    /// B↑(b): `b` together with all its predecessors.
    pub fn box_parents(&self, b: &VertexId) -> Result<BTreeSet<VertexId>, PatternError> {
        self.require_bang(b)?;
        let mut s = self.graph.pred(b);
        s.insert(b.clone());
        Ok(s)
    }

    /// Top-level !-vertices: those with no parent box.
    pub fn top_level_bangs(&self) -> impl Iterator<Item = &VertexId> {
        self.graph.bang_vertices().filter(|b| self.graph.in_degree(b) == 0)
    }

    /// Σ-vertices that lie in no !-box.
    pub fn unboxed_sigma(&self) -> impl Iterator<Item = &VertexId> {
        self.graph.sigma_vertices().filter(|v| self.graph.sigma_in_degree(v) == self.graph.in_degree(v))
    }

    /// Σ(G): the full subgraph on node- and wire-vertices.
    pub fn sigma(&self) -> TypedGraph {
        self.graph.full_subgraph(self.graph.sigma_vertices())
    }

    /// β(G): the full subgraph on !-vertices.
    pub fn beta(&self) -> TypedGraph {
        self.graph.full_subgraph(self.graph.bang_vertices())
    }

    /// The underlying string graph with every !-box forgotten.
    pub fn strip_boxes(&self) -> TypedGraph {
        let s = self.sigma();
        debug_assert_eq!(s.is_string_graph(), Ok(true));
        s
    }

    pub fn classify_pair(&self, b1: &VertexId, b2: &VertexId) -> Result<BoxRelation, PatternError> {
        let c1 = self.box_contents(b1)?;
        let c2 = self.box_contents(b2)?;
        Ok(if c1.contains(b2) {
            BoxRelation::FirstContainsSecond
        } else if c2.contains(b1) {
            BoxRelation::SecondContainsFirst
        } else if c1.intersection(&c2).next().is_some() {
            BoxRelation::Overlapping
        } else {
            BoxRelation::Disjoint
        })
    }

    /// COPY: two copies of the graph glued along `G \ B(b)`. The returned map
    /// sends each element of the original to its image in the second copy
    /// (elements outside B(b) map to themselves).
    pub fn copy_box(&self, b: &VertexId) -> Result<(PatternGraph, GraphMap), PatternError> {
        let contents = self.box_contents(b)?;
        let rest = Subgraph::full(&self.graph, self.graph.vertex_ids().filter(|v| !contents.contains(*v)).cloned());
        let po = self.graph.glued_pushout(&rest)?;
        Ok((PatternGraph::trusted(po.graph), po.right))
    }

    /// DROP: remove `b` itself, keeping its contents.
    pub fn drop_box(&self, b: &VertexId) -> Result<PatternGraph, PatternError> {
        self.require_bang(b)?;
        let g = self.graph.subtract(&Subgraph::full(&self.graph, [b.clone()]))?;
        Ok(PatternGraph::trusted(g))
    }

    /// KILL: remove B(b) entirely.
    pub fn kill_box(&self, b: &VertexId) -> Result<PatternGraph, PatternError> {
        let contents = self.box_contents(b)?;
        let g = self.graph.subtract(&Subgraph::full(&self.graph, contents))?;
        Ok(PatternGraph::trusted(g))
    }

    /// Check the MERGE precondition without performing it.
    pub fn check_mergeable(&self, b: &VertexId, b2: &VertexId) -> Result<(), PatternError> {
        let fail = |clause| Err(PatternError::MergePrecondition { b: b.clone(), b2: b2.clone(), clause });
        self.require_bang(b)?;
        self.require_bang(b2)?;
        if b == b2 {
            return fail(MergeClause::SameVertex);
        }
        let mut p1 = self.box_parents(b)?;
        p1.remove(b);
        let mut p2 = self.box_parents(b2)?;
        p2.remove(b2);
        if p1 != p2 {
            return fail(MergeClause::ParentsDiffer);
        }
        if self.box_contents(b)?.intersection(&self.box_contents(b2)?).next().is_some() {
            return fail(MergeClause::BoxesOverlap);
        }
        Ok(())
    }

    /// MERGE: identify `b2` with `b` (which names the result).
    pub fn merge_boxes(&self, b: &VertexId, b2: &VertexId) -> Result<(PatternGraph, GraphMap), PatternError> {
        self.check_mergeable(b, b2)?;
        let (g, map) = self.graph.quotient_identify(&[(b.clone(), b2.clone())])?;
        Ok((PatternGraph::trusted(g), map))
    }

    /// Apply one operation. For COPY the fresh id given to the copy of the
    /// !-vertex is checked against the op's record, when it has one.
    pub fn apply(&self, op: &InstOp) -> Result<PatternGraph, PatternError> {
        Ok(self.apply_with_map(op)?.0)
    }

    /// Apply one operation, returning the map from the old graph to the new
    /// one (partial for DROP and KILL; for COPY the second copy).
    pub fn apply_with_map(&self, op: &InstOp) -> Result<(PatternGraph, GraphMap), PatternError> {
        match op {
            InstOp::Copy { bang, fresh } => {
                let (g, map) = self.copy_box(bang)?;
                let actual = &map.vertices[bang];
                if let Some(expected) = fresh {
                    if expected != actual {
                        return Err(PatternError::FreshNameMismatch {
                            bang: bang.clone(),
                            expected: expected.clone(),
                            actual: actual.clone(),
                        });
                    }
                }
                Ok((g, map))
            }
            InstOp::Drop(b) => {
                let g = self.drop_box(b)?;
                let map = GraphMap::identity(&self.graph).restrict(g.graph());
                Ok((g, map))
            }
            InstOp::Kill(b) => {
                let g = self.kill_box(b)?;
                let map = GraphMap::identity(&self.graph).restrict(g.graph());
                Ok((g, map))
            }
            InstOp::Merge(b, b2) => self.merge_boxes(b, b2),
        }
    }

    pub fn apply_instantiation(&self, s: &Instantiation) -> Result<PatternGraph, PatternError> {
        s.apply(self)
    }
}

/// One !-box operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OpRecord", try_from = "OpRecord")]
pub enum InstOp {
    /// Copy a box. `fresh` records the id the copied !-vertex receives, so
    /// later steps can refer to it; `None` skips the check on replay.
    Copy {
        bang: VertexId,
        fresh: Option<VertexId>,
    },
    Drop(VertexId),
    Kill(VertexId),
    Merge(VertexId, VertexId),
}

/// Wire form of [`InstOp`]: `{"op": "copy", "bang": .., "fresh": ..}`,
/// `{"op": "drop" | "kill", "bang": ..}` or `{"op": "merge", "bangs": [..]}`.
#[derive(Serialize, Deserialize)]
struct OpRecord {
    op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bang: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fresh: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bangs: Option<[VertexId; 2]>,
}

impl From<InstOp> for OpRecord {
    fn from(op: InstOp) -> Self {
        let rec = |op: &str, bang| OpRecord { op: op.into(), bang: Some(bang), fresh: None, bangs: None };
        match op {
            InstOp::Copy { bang, fresh } => OpRecord { fresh, ..rec("copy", bang) },
            InstOp::Drop(b) => rec("drop", b),
            InstOp::Kill(b) => rec("kill", b),
            InstOp::Merge(a, b) => OpRecord { op: "merge".into(), bang: None, fresh: None, bangs: Some([a, b]) },
        }
    }
}

impl TryFrom<OpRecord> for InstOp {
    type Error = String;

    fn try_from(r: OpRecord) -> Result<Self, String> {
        let bang = || r.bang.clone().ok_or_else(|| format!("{} op needs a \"bang\" field", r.op));
        Ok(match r.op.as_str() {
            "copy" => InstOp::Copy { bang: bang()?, fresh: r.fresh.clone() },
            "drop" => InstOp::Drop(bang()?),
            "kill" => InstOp::Kill(bang()?),
            "merge" => {
                let [a, b] = r.bangs.clone().ok_or("merge op needs a \"bangs\" pair")?;
                InstOp::Merge(a, b)
            }
            other => return Err(format!("unknown op {other:?}")),
        })
    }
}

impl InstOp {
    pub fn copy(b: impl Into<VertexId>) -> Self {
        InstOp::Copy { bang: b.into(), fresh: None }
    }

    pub fn drop(b: impl Into<VertexId>) -> Self {
        InstOp::Drop(b.into())
    }

    pub fn kill(b: impl Into<VertexId>) -> Self {
        InstOp::Kill(b.into())
    }

    pub fn merge(b: impl Into<VertexId>, b2: impl Into<VertexId>) -> Self {
        InstOp::Merge(b.into(), b2.into())
    }

    /// The !-vertices the op refers to.
    pub fn bangs(&self) -> Vec<&VertexId> {
        match self {
            InstOp::Copy { bang, .. } | InstOp::Drop(bang) | InstOp::Kill(bang) => vec![bang],
            InstOp::Merge(a, b) => vec![a, b],
        }
    }

    /// The same op with its !-vertex ids renamed.
    pub fn renamed(&self, f: impl Fn(&VertexId) -> VertexId) -> InstOp {
        match self {
            InstOp::Copy { bang, fresh } => InstOp::Copy { bang: f(bang), fresh: fresh.as_ref().map(&f) },
            InstOp::Drop(b) => InstOp::Drop(f(b)),
            InstOp::Kill(b) => InstOp::Kill(f(b)),
            InstOp::Merge(a, b) => InstOp::Merge(f(a), f(b)),
        }
    }
}

impl fmt::Display for InstOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstOp::Copy { bang, fresh: Some(n) } => write!(f, "copy({bang} -> {n})"),
            InstOp::Copy { bang, fresh: None } => write!(f, "copy({bang})"),
            InstOp::Drop(b) => write!(f, "drop({b})"),
            InstOp::Kill(b) => write!(f, "kill({b})"),
            InstOp::Merge(a, b) => write!(f, "merge({a}, {b})"),
        }
    }
}

/// A replayable sequence of !-box operations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instantiation(pub Vec<InstOp>);

impl Instantiation {
    pub fn new(ops: Vec<InstOp>) -> Self {
        Self(ops)
    }

    pub fn ops(&self) -> &[InstOp] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn push(&mut self, op: InstOp) {
        self.0.push(op);
    }

    /// Replay on `p`. A failing step is reported with its index.
    pub fn apply(&self, p: &PatternGraph) -> Result<PatternGraph, PatternError> {
        let mut cur = p.clone();
        for (index, op) in self.0.iter().enumerate() {
            cur = cur.apply(op).map_err(|e| PatternError::Step { index, op: op.clone(), source: Box::new(e) })?;
        }
        Ok(cur)
    }
}

impl FromIterator<InstOp> for Instantiation {
    fn from_iter<T: IntoIterator<Item = InstOp>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}
