//! Typed directed graphs over the node / wire / !-vertex typegraph.
//!
//! A [`TypedGraph`] is a finite directed multigraph whose vertices carry a
//! [`VertexClass`]. String graphs, pattern graphs and the interface graphs of
//! rewrite rules are all values of this one type; the stricter notions are
//! checked by validators rather than enforced by the type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }

            /// The id of the `n`-th copy of this element.
            pub fn copy(&self, n: usize) -> Self {
                Self(format!("{}~{}", self.0, n))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

id_type!(
    /// Identifier of a vertex, unique within one graph.
    VertexId
);
id_type!(
    /// Identifier of an edge, unique within one graph.
    EdgeId
);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {edge} has an endpoint outside the subgraph")]
    NotASubgraph { edge: EdgeId },
    #[error("subgraph is not full: edge {0} joins two of its vertices but is missing")]
    NotFull(EdgeId),
    #[error("cannot identify {a} ({a_class}) with {b} ({b_class})")]
    ClassMismatch { a: VertexId, a_class: VertexClass, b: VertexId, b_class: VertexClass },
    #[error("graph is not well-typed: {}", join(.0))]
    InvalidTyping(Vec<TypingViolation>),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
}

pub(crate) fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// The kind labels available to node- and wire-vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    node_kinds: BTreeSet<String>,
    wire_kinds: BTreeSet<String>,
}

impl Signature {
    pub fn new<N, W>(node_kinds: N, wire_kinds: W) -> Result<Self, GraphError>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        W: IntoIterator,
        W::Item: Into<String>,
    {
        let node_kinds: BTreeSet<String> = node_kinds.into_iter().map(Into::into).collect();
        let wire_kinds: BTreeSet<String> = wire_kinds.into_iter().map(Into::into).collect();
        if node_kinds.is_empty() || wire_kinds.is_empty() {
            return Err(GraphError::InvalidSignature("node and wire kind sets must be nonempty".into()));
        }
        if let Some(shared) = node_kinds.intersection(&wire_kinds).next() {
            return Err(GraphError::InvalidSignature(format!("kind {shared:?} is both a node kind and a wire kind")));
        }
        Ok(Self { node_kinds, wire_kinds })
    }

    pub fn node_kinds(&self) -> impl Iterator<Item = &str> {
        self.node_kinds.iter().map(String::as_str)
    }

    pub fn wire_kinds(&self) -> impl Iterator<Item = &str> {
        self.wire_kinds.iter().map(String::as_str)
    }

    pub fn default_node_kind(&self) -> &str {
        self.node_kinds.iter().next().expect("nonempty")
    }

    pub fn default_wire_kind(&self) -> &str {
        self.wire_kinds.iter().next().expect("nonempty")
    }

    /// Whether `class` only uses kinds drawn from this signature.
    pub fn admits(&self, class: &VertexClass) -> bool {
        match class {
            VertexClass::Node(k) => self.node_kinds.contains(k),
            VertexClass::Wire(k) => self.wire_kinds.contains(k),
            VertexClass::Bang => true,
        }
    }

    /// Smallest signature containing both.
    pub fn merged(&self, other: &Signature) -> Signature {
        Signature {
            node_kinds: self.node_kinds.union(&other.node_kinds).cloned().collect(),
            wire_kinds: self.wire_kinds.union(&other.wire_kinds).cloned().collect(),
        }
    }
}

impl Default for Signature {
    fn default() -> Self {
        Self::new(["node"], ["wire"]).expect("default signature is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexClass {
    Node(String),
    Wire(String),
    Bang,
}

/// The three vertices of the typegraph, ignoring kind labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
    Node,
    Wire,
    Bang,
}

impl ClassTag {
    /// The edge table of the typegraph: node and wire vertices alternate or
    /// chain through wires, and !-vertices only receive edges from other
    /// !-vertices.
    pub fn edge_allowed(src: ClassTag, tgt: ClassTag) -> bool {
        use ClassTag::*;
        matches!((src, tgt), (Node, Wire) | (Wire, Node) | (Wire, Wire) | (Bang, Node) | (Bang, Wire) | (Bang, Bang))
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::Node => "node",
            ClassTag::Wire => "wire",
            ClassTag::Bang => "bang",
        })
    }
}

impl VertexClass {
    pub fn node(kind: impl Into<String>) -> Self {
        VertexClass::Node(kind.into())
    }

    pub fn wire(kind: impl Into<String>) -> Self {
        VertexClass::Wire(kind.into())
    }

    pub fn tag(&self) -> ClassTag {
        match self {
            VertexClass::Node(_) => ClassTag::Node,
            VertexClass::Wire(_) => ClassTag::Wire,
            VertexClass::Bang => ClassTag::Bang,
        }
    }

    pub fn kind(&self) -> Option<&str> {
        match self {
            VertexClass::Node(k) | VertexClass::Wire(k) => Some(k),
            VertexClass::Bang => None,
        }
    }

    pub fn is_node(&self) -> bool {
        matches!(self, VertexClass::Node(_))
    }

    pub fn is_wire(&self) -> bool {
        matches!(self, VertexClass::Wire(_))
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, VertexClass::Bang)
    }

    /// Node- and wire-vertices, i.e. everything that survives in Σ(G).
    pub fn is_sigma(&self) -> bool {
        !self.is_bang()
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexClass::Node(k) => write!(f, "node:{k}"),
            VertexClass::Wire(k) => write!(f, "wire:{k}"),
            VertexClass::Bang => f.write_str("bang"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub tgt: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypingViolation {
    DanglingEdge { edge: EdgeId, missing: VertexId },
    ForbiddenEdge { edge: EdgeId, src: ClassTag, tgt: ClassTag },
    BangSelfLoop { edge: EdgeId },
    UnknownKind { vertex: VertexId, class: VertexClass },
}

impl fmt::Display for TypingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypingViolation::DanglingEdge { edge, missing } => {
                write!(f, "edge {edge} refers to missing vertex {missing}")
            }
            TypingViolation::ForbiddenEdge { edge, src, tgt } => {
                write!(f, "edge {edge} is a forbidden {src}->{tgt} edge")
            }
            TypingViolation::BangSelfLoop { edge } => {
                write!(f, "edge {edge} is a stored self-loop on a !-vertex")
            }
            TypingViolation::UnknownKind { vertex, class } => {
                write!(f, "vertex {vertex} has kind {class} outside the signature")
            }
        }
    }
}

/// Inputs, outputs and isolated points of a graph.
///
/// A wire-vertex is an input when every in-edge it has comes from a
/// !-vertex, and an output when every out-edge goes to a !-vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub inputs: BTreeSet<VertexId>,
    pub outputs: BTreeSet<VertexId>,
    pub isolated: BTreeSet<VertexId>,
}

impl BoundaryReport {
    /// Inputs and outputs together.
    pub fn all(&self) -> BTreeSet<VertexId> {
        self.inputs.union(&self.outputs).cloned().collect()
    }
}

/// A set of vertices and edges, interpreted relative to some graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The full subgraph of `g` on `vertices`: every edge of `g` between two
    /// of them is included.
    pub fn full<I>(g: &TypedGraph, vertices: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<VertexId>,
    {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().map(Into::into).collect();
        let edges = g
            .edges()
            .filter(|(_, e)| vertices.contains(&e.src) && vertices.contains(&e.tgt))
            .map(|(id, _)| id.clone())
            .collect();
        Self { vertices, edges }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: self.vertices.union(&other.vertices).cloned().collect(),
            edges: self.edges.union(&other.edges).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: self.vertices.intersection(&other.vertices).cloned().collect(),
            edges: self.edges.intersection(&other.edges).cloned().collect(),
        }
    }

    /// Check that every id belongs to `g` and every edge's endpoints lie in
    /// the vertex set.
    pub fn check_in(&self, g: &TypedGraph) -> Result<(), GraphError> {
        for v in &self.vertices {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        for e in &self.edges {
            let edge = g.edge(e).ok_or_else(|| GraphError::UnknownEdge(e.clone()))?;
            if !self.vertices.contains(&edge.src) || !self.vertices.contains(&edge.tgt) {
                return Err(GraphError::NotASubgraph { edge: e.clone() });
            }
        }
        Ok(())
    }

    /// The first edge of `g` that joins two vertices of the subgraph without
    /// belonging to it, if any.
    pub fn missing_full_edge(&self, g: &TypedGraph) -> Option<EdgeId> {
        g.edges()
            .find(|(id, e)| {
                self.vertices.contains(&e.src) && self.vertices.contains(&e.tgt) && !self.edges.contains(*id)
            })
            .map(|(id, _)| id.clone())
    }
}

/// A pair of vertex and edge functions between two graphs.
///
/// Used for inclusions, pushout legs, quotient maps and matchings alike.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMap {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

impl GraphMap {
    pub fn identity(g: &TypedGraph) -> Self {
        Self {
            vertices: g.vertex_ids().map(|v| (v.clone(), v.clone())).collect(),
            edges: g.edge_ids().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    pub fn vertex(&self, v: &VertexId) -> Option<&VertexId> {
        self.vertices.get(v)
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&EdgeId> {
        self.edges.get(e)
    }

    /// `then ∘ self`: apply `self` first. Elements `then` does not map are
    /// dropped.
    pub fn then(&self, then: &GraphMap) -> GraphMap {
        GraphMap {
            vertices: self
                .vertices
                .iter()
                .filter_map(|(a, b)| then.vertices.get(b).map(|c| (a.clone(), c.clone())))
                .collect(),
            edges: self.edges.iter().filter_map(|(a, b)| then.edges.get(b).map(|c| (a.clone(), c.clone()))).collect(),
        }
    }

    /// Restriction to the elements of `dom`.
    pub fn restrict(&self, dom: &TypedGraph) -> GraphMap {
        GraphMap {
            vertices: self
                .vertices
                .iter()
                .filter(|(v, _)| dom.contains_vertex(v))
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|(e, _)| dom.contains_edge(e))
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let vs: BTreeSet<_> = self.vertices.values().collect();
        let es: BTreeSet<_> = self.edges.values().collect();
        vs.len() == self.vertices.len() && es.len() == self.edges.len()
    }

    /// Inverse of an injective map.
    pub fn inverse(&self) -> GraphMap {
        GraphMap {
            vertices: self.vertices.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// Check that this is a total, class-preserving graph homomorphism
    /// `dom -> cod`. Returns a description of the first failure.
    pub fn check_homomorphism(&self, dom: &TypedGraph, cod: &TypedGraph) -> Result<(), String> {
        for (v, class) in dom.vertices() {
            let Some(image) = self.vertices.get(v) else {
                return Err(format!("vertex {v} is unmapped"));
            };
            match cod.vertex(image) {
                None => return Err(format!("vertex {v} maps to missing vertex {image}")),
                Some(c) if c != class => return Err(format!("vertex {v} ({class}) maps to {image} ({c})")),
                Some(_) => {}
            }
        }
        for (e, edge) in dom.edges() {
            let Some(image) = self.edges.get(e) else {
                return Err(format!("edge {e} is unmapped"));
            };
            let Some(img) = cod.edge(image) else {
                return Err(format!("edge {e} maps to missing edge {image}"));
            };
            if self.vertices.get(&edge.src) != Some(&img.src) {
                return Err(format!("source of edge {e} does not commute with {image}"));
            }
            if self.vertices.get(&edge.tgt) != Some(&img.tgt) {
                return Err(format!("target of edge {e} does not commute with {image}"));
            }
        }
        Ok(())
    }
}

/// Result of gluing two copies of a graph along a shared subgraph.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub graph: TypedGraph,
    /// First copy: the identity on ids.
    pub left: GraphMap,
    /// Second copy: shared elements keep their id, the rest get fresh ids.
    pub right: GraphMap,
}

#[derive(Clone, Debug, Default)]
pub struct TypedGraph {
    signature: Signature,
    vertices: BTreeMap<VertexId, VertexClass>,
    edges: BTreeMap<EdgeId, Edge>,
    outgoing: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    incoming: BTreeMap<VertexId, BTreeSet<EdgeId>>,
}

impl PartialEq for TypedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for TypedGraph {}

impl TypedGraph {
    pub fn new(signature: Signature) -> Self {
        Self { signature, ..Default::default() }
    }

    /// Build a graph from raw parts. Duplicate ids are rejected; dangling
    /// edges are kept so that [`TypedGraph::validate_typing`] can report
    /// them.
    pub fn from_parts<V, E>(signature: Signature, vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (VertexId, VertexClass)>,
        E: IntoIterator<Item = (EdgeId, Edge)>,
    {
        let mut g = TypedGraph::new(signature);
        for (id, class) in vertices {
            g.add_vertex(id, class)?;
        }
        for (id, edge) in edges {
            if g.edges.contains_key(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
            g.insert_edge_unchecked(id, edge);
        }
        Ok(g)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn set_signature(&mut self, signature: Signature) {
        self.signature = signature;
    }

    pub fn add_vertex(&mut self, id: impl Into<VertexId>, class: VertexClass) -> Result<(), GraphError> {
        let id = id.into();
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.vertices.insert(id, class);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<EdgeId>,
        src: impl Into<VertexId>,
        tgt: impl Into<VertexId>,
    ) -> Result<(), GraphError> {
        let (id, src, tgt) = (id.into(), src.into(), tgt.into());
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        for v in [&src, &tgt] {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        self.insert_edge_unchecked(id, Edge { src, tgt });
        Ok(())
    }

    fn insert_edge_unchecked(&mut self, id: EdgeId, edge: Edge) {
        self.outgoing.entry(edge.src.clone()).or_default().insert(id.clone());
        self.incoming.entry(edge.tgt.clone()).or_default().insert(id.clone());
        self.edges.insert(id, edge);
    }

    pub fn remove_edge(&mut self, id: &EdgeId) -> Option<Edge> {
        let edge = self.edges.remove(id)?;
        if let Some(s) = self.outgoing.get_mut(&edge.src) {
            s.remove(id);
        }
        if let Some(s) = self.incoming.get_mut(&edge.tgt) {
            s.remove(id);
        }
        Some(edge)
    }

    /// Remove a vertex together with every incident edge.
    pub fn remove_vertex(&mut self, id: &VertexId) -> Option<VertexClass> {
        let class = self.vertices.remove(id)?;
        let incident: Vec<EdgeId> = self.incident_edges(id).cloned().collect();
        for e in incident {
            self.remove_edge(&e);
        }
        self.outgoing.remove(id);
        self.incoming.remove(id);
        Some(class)
    }

    /// Redirect the target of an existing edge.
    pub fn retarget_edge(&mut self, id: &EdgeId, tgt: VertexId) -> Result<(), GraphError> {
        if !self.vertices.contains_key(&tgt) {
            return Err(GraphError::UnknownVertex(tgt));
        }
        let edge = self.remove_edge(id).ok_or_else(|| GraphError::UnknownEdge(id.clone()))?;
        self.insert_edge_unchecked(id.clone(), Edge { src: edge.src, tgt });
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, &VertexClass)> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &Edge)> {
        self.edges.iter()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.keys()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&VertexClass> {
        self.vertices.get(id)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn contains_vertex(&self, id: &VertexId) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn contains_edge(&self, id: &EdgeId) -> bool {
        self.edges.contains_key(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn class_of(&self, id: &VertexId) -> Option<ClassTag> {
        self.vertices.get(id).map(VertexClass::tag)
    }

    pub fn is_bang(&self, id: &VertexId) -> bool {
        matches!(self.vertices.get(id), Some(VertexClass::Bang))
    }

    pub fn is_wire(&self, id: &VertexId) -> bool {
        matches!(self.vertices.get(id), Some(VertexClass::Wire(_)))
    }

    pub fn is_node(&self, id: &VertexId) -> bool {
        matches!(self.vertices.get(id), Some(VertexClass::Node(_)))
    }

    pub fn node_vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|(_, c)| c.is_node()).map(|(v, _)| v)
    }

    pub fn wire_vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|(_, c)| c.is_wire()).map(|(v, _)| v)
    }

    pub fn bang_vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|(_, c)| c.is_bang()).map(|(v, _)| v)
    }

    /// Node- and wire-vertices.
    pub fn sigma_vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter().filter(|(_, c)| c.is_sigma()).map(|(v, _)| v)
    }

    pub fn sigma_count(&self) -> usize {
        self.sigma_vertices().count()
    }

    pub fn has_bangs(&self) -> bool {
        self.bang_vertices().next().is_some()
    }

    pub fn out_edges(&self, v: &VertexId) -> impl Iterator<Item = &EdgeId> {
        self.outgoing.get(v).into_iter().flatten()
    }

    pub fn in_edges(&self, v: &VertexId) -> impl Iterator<Item = &EdgeId> {
        self.incoming.get(v).into_iter().flatten()
    }

    /// Out-edges followed by in-edges; a self-loop appears twice.
    pub fn incident_edges(&self, v: &VertexId) -> impl Iterator<Item = &EdgeId> {
        self.out_edges(v).chain(self.in_edges(v))
    }

    pub fn out_degree(&self, v: &VertexId) -> usize {
        self.outgoing.get(v).map_or(0, BTreeSet::len)
    }

    pub fn in_degree(&self, v: &VertexId) -> usize {
        self.incoming.get(v).map_or(0, BTreeSet::len)
    }

    pub fn src(&self, e: &EdgeId) -> Option<&VertexId> {
        self.edges.get(e).map(|e| &e.src)
    }

    pub fn tgt(&self, e: &EdgeId) -> Option<&VertexId> {
        self.edges.get(e).map(|e| &e.tgt)
    }

    /// Targets of the out-edges of `v`.
    pub fn succ(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.out_edges(v).map(|e| self.edges[e].tgt.clone()).collect()
    }

    /// Sources of the in-edges of `v`.
    pub fn pred(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.in_edges(v).map(|e| self.edges[e].src.clone()).collect()
    }

    /// Edges from `src` to `tgt`, in id order.
    pub fn edges_between<'a>(&'a self, src: &'a VertexId, tgt: &'a VertexId) -> impl Iterator<Item = &'a EdgeId> + 'a {
        self.out_edges(src).filter(move |e| &self.edges[*e].tgt == tgt)
    }

    /// In-edges of `v` whose source is not a !-vertex.
    pub fn sigma_in_degree(&self, v: &VertexId) -> usize {
        self.in_edges(v).filter(|e| !self.is_bang(&self.edges[*e].src)).count()
    }

    /// Out-edges of `v` whose target is not a !-vertex.
    pub fn sigma_out_degree(&self, v: &VertexId) -> usize {
        self.out_edges(v).filter(|e| !self.is_bang(&self.edges[*e].tgt)).count()
    }

    /// Every typing problem: forbidden class pairs, dangling endpoints,
    /// stored !-self-loops and kinds missing from the signature.
    pub fn validate_typing(&self) -> Vec<TypingViolation> {
        let mut out = Vec::new();
        for (v, class) in &self.vertices {
            if !self.signature.admits(class) {
                out.push(TypingViolation::UnknownKind { vertex: v.clone(), class: class.clone() });
            }
        }
        for (id, e) in &self.edges {
            let mut dangling = false;
            for end in [&e.src, &e.tgt] {
                if !self.vertices.contains_key(end) {
                    dangling = true;
                    out.push(TypingViolation::DanglingEdge { edge: id.clone(), missing: end.clone() });
                }
            }
            if dangling {
                continue;
            }
            let (s, t) = (self.vertices[&e.src].tag(), self.vertices[&e.tgt].tag());
            if !ClassTag::edge_allowed(s, t) {
                out.push(TypingViolation::ForbiddenEdge { edge: id.clone(), src: s, tgt: t });
            } else if s == ClassTag::Bang && e.src == e.tgt {
                out.push(TypingViolation::BangSelfLoop { edge: id.clone() });
            }
        }
        out
    }

    pub(crate) fn require_typed(&self) -> Result<(), GraphError> {
        let v = self.validate_typing();
        if v.is_empty() {
            Ok(())
        } else {
            Err(GraphError::InvalidTyping(v))
        }
    }

    /// True iff there are no !-vertices and every wire-vertex has at most one
    /// in-edge and at most one out-edge.
    pub fn is_string_graph(&self) -> Result<bool, GraphError> {
        self.require_typed()?;
        Ok(!self.has_bangs() && self.wire_vertices().all(|w| self.in_degree(w) <= 1 && self.out_degree(w) <= 1))
    }

    /// Inputs, outputs and isolated points, with edges from !-vertices
    /// ignored.
    pub fn boundary(&self) -> BoundaryReport {
        let mut report = BoundaryReport::default();
        for w in self.wire_vertices() {
            let input = self.sigma_in_degree(w) == 0;
            let output = self.sigma_out_degree(w) == 0;
            if input {
                report.inputs.insert(w.clone());
            }
            if output {
                report.outputs.insert(w.clone());
            }
            if input && output {
                report.isolated.insert(w.clone());
            }
        }
        report
    }

    pub fn is_input(&self, v: &VertexId) -> bool {
        self.is_wire(v) && self.sigma_in_degree(v) == 0
    }

    pub fn is_output(&self, v: &VertexId) -> bool {
        self.is_wire(v) && self.sigma_out_degree(v) == 0
    }

    /// A graph made only of isolated wire-vertices.
    pub fn is_point_graph(&self) -> bool {
        self.edges.is_empty() && self.vertices.values().all(VertexClass::is_wire)
    }

    /// The full subgraph on `vertices`, as a graph in its own right.
    pub fn full_subgraph<'a, I>(&self, vertices: I) -> TypedGraph
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let keep: BTreeSet<&VertexId> = vertices.into_iter().collect();
        let mut g = TypedGraph::new(self.signature.clone());
        for (v, c) in &self.vertices {
            if keep.contains(v) {
                g.vertices.insert(v.clone(), c.clone());
            }
        }
        for (id, e) in &self.edges {
            if keep.contains(&e.src) && keep.contains(&e.tgt) {
                g.insert_edge_unchecked(id.clone(), e.clone());
            }
        }
        g
    }

    /// The subgraph given by `h`, as a graph in its own right.
    pub fn subgraph(&self, h: &Subgraph) -> Result<TypedGraph, GraphError> {
        h.check_in(self)?;
        let mut g = TypedGraph::new(self.signature.clone());
        for v in &h.vertices {
            g.vertices.insert(v.clone(), self.vertices[v].clone());
        }
        for e in &h.edges {
            g.insert_edge_unchecked(e.clone(), self.edges[e].clone());
        }
        Ok(g)
    }

    /// `G \ H`: the largest subgraph disjoint from `h`. Removes the vertices
    /// and edges of `h` and every edge incident to a removed vertex.
    pub fn subtract(&self, h: &Subgraph) -> Result<TypedGraph, GraphError> {
        for v in &h.vertices {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        for e in &h.edges {
            if !self.contains_edge(e) {
                return Err(GraphError::UnknownEdge(e.clone()));
            }
        }
        let mut g = self.clone();
        for e in &h.edges {
            g.remove_edge(e);
        }
        for v in &h.vertices {
            g.remove_vertex(v);
        }
        Ok(g)
    }

    /// Whether removing the full subgraph `o` creates no new inputs or
    /// outputs.
    pub fn is_open_subgraph(&self, o: &Subgraph) -> Result<bool, GraphError> {
        o.check_in(self)?;
        if let Some(e) = o.missing_full_edge(self) {
            return Err(GraphError::NotFull(e));
        }
        Ok(self.is_open_vertex_set(&o.vertices))
    }

    /// Openness of the full subgraph on `vertices`, without id checks.
    pub(crate) fn is_open_vertex_set(&self, vertices: &BTreeSet<VertexId>) -> bool {
        // A surviving wire-vertex becomes a new input exactly when all of its
        // non-! in-edges come from removed vertices (and it had at least one).
        self.wire_vertices().filter(|w| !vertices.contains(*w)).all(|w| {
            let sources = self.in_edges(w).map(|e| &self.edges[e].src).filter(|s| !self.is_bang(s));
            let targets = self.out_edges(w).map(|e| &self.edges[e].tgt).filter(|t| !self.is_bang(t));
            let new_input = {
                let s: Vec<_> = sources.collect();
                !s.is_empty() && s.iter().all(|s| vertices.contains(*s))
            };
            let new_output = {
                let t: Vec<_> = targets.collect();
                !t.is_empty() && t.iter().all(|t| vertices.contains(*t))
            };
            !new_input && !new_output
        })
    }

    /// Smallest `n >= 1` such that `x~n` is unused for every given id.
    pub(crate) fn copy_index<'a>(
        &self,
        vertices: impl Iterator<Item = &'a VertexId> + Clone,
        edges: impl Iterator<Item = &'a EdgeId> + Clone,
    ) -> usize {
        (1..)
            .find(|&n| {
                vertices.clone().all(|v| !self.vertices.contains_key(&v.copy(n)))
                    && edges.clone().all(|e| !self.edges.contains_key(&e.copy(n)))
            })
            .expect("unbounded search")
    }

    /// Two copies of `self` glued along `shared`. Shared elements appear once
    /// (with their own ids); everything else appears twice, the second copy
    /// with ids `x~n` for a single copy index `n` chosen to avoid clashes.
    pub fn glued_pushout(&self, shared: &Subgraph) -> Result<Pushout, GraphError> {
        shared.check_in(self)?;
        let copied_v: Vec<&VertexId> = self.vertex_ids().filter(|v| !shared.vertices.contains(*v)).collect();
        let copied_e: Vec<&EdgeId> = self.edge_ids().filter(|e| !shared.edges.contains(*e)).collect();
        let n = self.copy_index(copied_v.iter().copied(), copied_e.iter().copied());

        let mut graph = self.clone();
        let left = GraphMap::identity(self);
        let mut right = GraphMap::default();
        for v in self.vertex_ids() {
            let image = if shared.vertices.contains(v) {
                v.clone()
            } else {
                let fresh = v.copy(n);
                graph.vertices.insert(fresh.clone(), self.vertices[v].clone());
                fresh
            };
            right.vertices.insert(v.clone(), image);
        }
        for (e, edge) in self.edges() {
            let image = if shared.edges.contains(e) {
                e.clone()
            } else {
                let fresh = e.copy(n);
                graph.insert_edge_unchecked(
                    fresh.clone(),
                    Edge { src: right.vertices[&edge.src].clone(), tgt: right.vertices[&edge.tgt].clone() },
                );
                fresh
            };
            right.edges.insert(e.clone(), image);
        }
        Ok(Pushout { graph, left, right })
    }

    /// Identify each pair of vertices. The first vertex of a pair names the
    /// fused vertex. Parallel edges between !-vertices that arise are
    /// collapsed to the one with the smallest id and !-self-loops are
    /// dropped; other parallel edges are kept. Returns the quotient and the
    /// (surjective) quotient map.
    pub fn quotient_identify(&self, pairs: &[(VertexId, VertexId)]) -> Result<(TypedGraph, GraphMap), GraphError> {
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        fn find(parent: &BTreeMap<VertexId, VertexId>, v: &VertexId) -> VertexId {
            let mut cur = v.clone();
            while let Some(p) = parent.get(&cur) {
                cur = p.clone();
            }
            cur
        }
        for (a, b) in pairs {
            let ca = self.vertex(a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let cb = self.vertex(b).ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            if ca != cb {
                return Err(GraphError::ClassMismatch {
                    a: a.clone(),
                    a_class: ca.clone(),
                    b: b.clone(),
                    b_class: cb.clone(),
                });
            }
            let (ra, rb) = (find(&parent, a), find(&parent, b));
            if ra != rb {
                parent.insert(rb, ra);
            }
        }

        let mut map = GraphMap::default();
        let mut q = TypedGraph::new(self.signature.clone());
        for (v, c) in &self.vertices {
            let r = find(&parent, v);
            q.vertices.entry(r.clone()).or_insert_with(|| c.clone());
            map.vertices.insert(v.clone(), r);
        }
        let mut bang_edges: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
        for (id, e) in &self.edges {
            let (s, t) = (map.vertices[&e.src].clone(), map.vertices[&e.tgt].clone());
            if q.is_bang(&s) && q.is_bang(&t) {
                if s == t {
                    continue;
                }
                if let Some(kept) = bang_edges.get(&(s.clone(), t.clone())) {
                    map.edges.insert(id.clone(), kept.clone());
                    continue;
                }
                bang_edges.insert((s.clone(), t.clone()), id.clone());
            }
            q.insert_edge_unchecked(id.clone(), Edge { src: s, tgt: t });
            map.edges.insert(id.clone(), id.clone());
        }
        Ok((q, map))
    }
}
