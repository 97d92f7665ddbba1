use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Signature, TypedGraph, VertexClass, VertexId};
use crate::pattern::{validate_pattern, PatternGraph};
use crate::rewriting::{validate_rewrite_pattern, RewritePattern};

use super::IoError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub node_kinds: Vec<String>,
    pub wire_kinds: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassDoc {
    Node,
    Wire,
    Bang,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    pub class: ClassDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: EdgeId,
    pub src: VertexId,
    pub tgt: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub bang: VertexId,
    #[serde(default)]
    pub contents: Vec<VertexId>,
    #[serde(default)]
    pub children: Vec<VertexId>,
}

/// A graph or pattern graph on disk. Box membership is given by `boxes`;
/// edges out of !-vertices never appear in `edges`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureDoc>,
    #[serde(default)]
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boxes: Vec<BoxDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub point: VertexId,
    pub lhs: VertexId,
    pub rhs: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxPairDoc {
    pub lhs: VertexId,
    pub rhs: VertexId,
}

/// A rewrite rule or rewrite pattern on disk. The interface is implicit:
/// one point per `interface` entry and one !-vertex per `box_map` entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDocument {
    pub name: String,
    pub lhs: GraphDocument,
    pub rhs: GraphDocument,
    #[serde(default)]
    pub interface: Vec<PointDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub box_map: Vec<BoxPairDoc>,
}

/// Something added while loading to close box nesting under transitivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub bang: VertexId,
    pub added: VertexId,
    pub reason: CompletionReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionReason {
    /// A box nested in a nested box.
    TransitiveChild,
    /// The contents of a nested box.
    NestedContents,
}

impl std::fmt::Display for Completion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let why = match self.reason {
            CompletionReason::TransitiveChild => "nested via a child box",
            CompletionReason::NestedContents => "contained in a child box",
        };
        write!(f, "added {} to box {} ({why})", self.added, self.bang)
    }
}

#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: PatternGraph,
    pub completions: Vec<Completion>,
}

#[derive(Clone, Debug)]
pub struct ParsedRule {
    pub rule: RewritePattern,
    pub completions: Vec<Completion>,
}

fn box_edge_id(bang: &VertexId, target: &VertexId) -> EdgeId {
    EdgeId::new(format!("{bang}>{target}"))
}

fn signature_for(doc: &GraphDocument) -> Result<Signature, IoError> {
    if let Some(s) = &doc.signature {
        return Ok(Signature::new(s.node_kinds.iter().cloned(), s.wire_kinds.iter().cloned())?);
    }
    let used = |class: ClassDoc, default: &str| -> BTreeSet<String> {
        let kinds: BTreeSet<String> = doc
            .vertices
            .iter()
            .filter(|v| v.class == class)
            .map(|v| v.kind.clone().unwrap_or_else(|| default.to_owned()))
            .collect();
        if kinds.is_empty() {
            [default.to_owned()].into()
        } else {
            kinds
        }
    };
    let d = Signature::default();
    Ok(Signature::new(used(ClassDoc::Node, d.default_node_kind()), used(ClassDoc::Wire, d.default_wire_kind()))?)
}

impl GraphDocument {
    /// Build the graph, completing box nesting: children of children become
    /// children, and a box holds everything its children hold.
    pub fn decode(&self) -> Result<(TypedGraph, Vec<Completion>), IoError> {
        let sig = signature_for(self)?;
        let mut g = TypedGraph::new(sig.clone());
        for v in &self.vertices {
            let class = match v.class {
                ClassDoc::Node => VertexClass::Node(v.kind.clone().unwrap_or_else(|| sig.default_node_kind().into())),
                ClassDoc::Wire => VertexClass::Wire(v.kind.clone().unwrap_or_else(|| sig.default_wire_kind().into())),
                ClassDoc::Bang => VertexClass::Bang,
            };
            g.add_vertex(v.id.clone(), class)?;
        }
        for e in &self.edges {
            if g.is_bang(&e.src) || g.is_bang(&e.tgt) {
                return Err(IoError::BangEdge(e.id.clone()));
            }
            g.add_edge(e.id.clone(), e.src.clone(), e.tgt.clone())?;
        }

        let mut children: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        let mut contents: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for b in &self.boxes {
            if !g.is_bang(&b.bang) {
                return Err(IoError::NotABang(b.bang.clone()));
            }
            for c in &b.children {
                if !g.is_bang(c) {
                    return Err(IoError::NotABang(c.clone()));
                }
            }
            children.entry(b.bang.clone()).or_default().extend(b.children.iter().cloned());
            contents.entry(b.bang.clone()).or_default().extend(b.contents.iter().cloned());
        }

        let mut completions = Vec::new();
        // Transitive closure of the child relation, to a fixpoint.
        loop {
            let mut added = Vec::new();
            for (b, cs) in &children {
                for c in cs {
                    for gc in children.get(c).into_iter().flatten() {
                        if gc != b && !cs.contains(gc) {
                            added.push((b.clone(), gc.clone()));
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (b, gc) in added {
                if children.get_mut(&b).expect("present").insert(gc.clone()) {
                    completions.push(Completion { bang: b, added: gc, reason: CompletionReason::TransitiveChild });
                }
            }
        }
        for (b, cs) in &children {
            let mut extra = BTreeSet::new();
            for c in cs {
                for v in contents.get(c).into_iter().flatten() {
                    if !contents.get(b).is_some_and(|own| own.contains(v)) {
                        extra.insert(v.clone());
                    }
                }
            }
            for v in extra {
                completions.push(Completion {
                    bang: b.clone(),
                    added: v.clone(),
                    reason: CompletionReason::NestedContents,
                });
                contents.entry(b.clone()).or_default().insert(v);
            }
        }

        for (b, cs) in &children {
            for c in cs {
                g.add_edge(box_edge_id(b, c), b.clone(), c.clone())?;
            }
        }
        for (b, vs) in &contents {
            for v in vs {
                g.add_edge(box_edge_id(b, v), b.clone(), v.clone())?;
            }
        }
        g.require_typed()?;
        Ok((g, completions))
    }

    pub fn encode(g: &TypedGraph) -> GraphDocument {
        let sig = g.signature();
        let vertices = g
            .vertices()
            .map(|(id, c)| VertexDoc {
                id: id.clone(),
                class: match c {
                    VertexClass::Node(_) => ClassDoc::Node,
                    VertexClass::Wire(_) => ClassDoc::Wire,
                    VertexClass::Bang => ClassDoc::Bang,
                },
                kind: c.kind().map(str::to_owned),
            })
            .collect();
        let edges = g
            .edges()
            .filter(|(_, e)| !g.is_bang(&e.src))
            .map(|(id, e)| EdgeDoc { id: id.clone(), src: e.src.clone(), tgt: e.tgt.clone() })
            .collect();
        let boxes = g
            .bang_vertices()
            .map(|b| {
                let succ = g.succ(b);
                BoxDoc {
                    bang: b.clone(),
                    contents: succ.iter().filter(|v| !g.is_bang(v)).cloned().collect(),
                    children: succ.iter().filter(|v| g.is_bang(v)).cloned().collect(),
                }
            })
            .collect();
        GraphDocument {
            signature: Some(SignatureDoc {
                node_kinds: sig.node_kinds().map(str::to_owned).collect(),
                wire_kinds: sig.wire_kinds().map(str::to_owned).collect(),
            }),
            vertices,
            edges,
            boxes,
        }
    }

    /// Decode and check that the result is a pattern graph (a string graph,
    /// when there are no boxes).
    pub fn load(&self) -> Result<ParsedGraph, IoError> {
        let (g, completions) = self.decode()?;
        let violations = validate_pattern(&g);
        if !violations.is_empty() {
            return Err(IoError::InvalidPattern(violations));
        }
        Ok(ParsedGraph { graph: PatternGraph::new(g).expect("validated"), completions })
    }
}

impl RuleDocument {
    pub fn load(&self) -> Result<ParsedRule, IoError> {
        let lhs = self.lhs.load()?;
        let rhs = self.rhs.load()?;
        let points: Vec<_> = self.interface.iter().map(|p| (p.point.clone(), p.lhs.clone(), p.rhs.clone())).collect();
        let boxes: Vec<_> = self.box_map.iter().map(|b| (b.lhs.clone(), b.rhs.clone())).collect();
        let rule = RewritePattern::from_span(self.name.clone(), lhs.graph, rhs.graph, &points, &boxes)?;
        let violations = validate_rewrite_pattern(&rule);
        if !violations.is_empty() {
            return Err(IoError::InvalidRule(violations));
        }
        let mut completions = lhs.completions;
        completions.extend(rhs.completions);
        Ok(ParsedRule { rule, completions })
    }

    pub fn encode(rp: &RewritePattern) -> RuleDocument {
        let i = rp.interface.graph();
        RuleDocument {
            name: rp.name.clone(),
            lhs: GraphDocument::encode(rp.lhs.graph()),
            rhs: GraphDocument::encode(rp.rhs.graph()),
            interface: i
                .sigma_vertices()
                .map(|p| PointDoc { point: p.clone(), lhs: rp.i1.vertices[p].clone(), rhs: rp.i2.vertices[p].clone() })
                .collect(),
            box_map: i
                .bang_vertices()
                .map(|b| BoxPairDoc { lhs: rp.i1.vertices[b].clone(), rhs: rp.i2.vertices[b].clone() })
                .collect(),
        }
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Parse and validate a graph document.
pub fn parse_graph(text: &str) -> Result<ParsedGraph, IoError> {
    from_json::<GraphDocument>(text)?.load()
}

/// Parse and validate a rule document.
pub fn parse_rule(text: &str) -> Result<ParsedRule, IoError> {
    from_json::<RuleDocument>(text)?.load()
}

/// Pretty-printed JSON, with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn serialize_graph(g: &TypedGraph) -> String {
    to_json(&GraphDocument::encode(g))
}

pub fn serialize_rule(rp: &RewritePattern) -> String {
    to_json(&RuleDocument::encode(rp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::isomorphic;

    #[test]
    fn bstar_document() {
        let text = r#"{
            "vertices": [
                {"id": "n", "class": "node"},
                {"id": "i1", "class": "wire"},
                {"id": "b", "class": "bang"}
            ],
            "edges": [{"id": "e1", "src": "i1", "tgt": "n"}],
            "boxes": [{"bang": "b", "contents": ["i1"]}]
        }"#;
        let p = parse_graph(text).unwrap();
        assert_eq!(p.graph.graph().vertex_count(), 3);
        assert!(p.completions.is_empty());
        assert!(isomorphic(p.graph.graph(), fixtures::bstar().graph()));
    }

    #[test]
    fn node_to_node_edge_is_named() {
        let text = r#"{
            "vertices": [{"id": "a", "class": "node"}, {"id": "b", "class": "node"}],
            "edges": [{"id": "bad", "src": "a", "tgt": "b"}]
        }"#;
        let err = parse_graph(text).unwrap_err();
        assert!(err.to_string().contains("bad"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn children_become_nesting_edges_with_closure() {
        let text = r#"{
            "vertices": [
                {"id": "w", "class": "wire"},
                {"id": "b1", "class": "bang"},
                {"id": "b2", "class": "bang"},
                {"id": "b3", "class": "bang"}
            ],
            "boxes": [
                {"bang": "b1", "children": ["b2"]},
                {"bang": "b2", "children": ["b3"]},
                {"bang": "b3", "contents": ["w"]}
            ]
        }"#;
        let p = parse_graph(text).unwrap();
        let g = p.graph.graph();
        assert!(g.succ(&"b1".into()).contains(&VertexId::from("b2")));
        assert!(g.succ(&"b1".into()).contains(&VertexId::from("b3")));
        assert!(g.succ(&"b1".into()).contains(&VertexId::from("w")));
        assert_eq!(p.completions.len(), 3);
    }

    #[test]
    fn json_errors_carry_a_position() {
        let err = parse_graph("{\n  \"vertices\": [,]\n}").unwrap_err();
        assert!(matches!(err, IoError::Json { line: 2, .. }), "{err:?}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn round_trips() {
        for g in [fixtures::star(2), TypedGraph::default(), fixtures::spider_pattern().lhs.into_graph()] {
            let back = parse_graph(&serialize_graph(&g)).unwrap();
            assert!(isomorphic(back.graph.graph(), &g));
            assert_eq!(back.graph.graph().vertex_ids().collect::<Vec<_>>(), g.vertex_ids().collect::<Vec<_>>());
        }
        let empty = serialize_graph(&TypedGraph::default());
        assert!(empty.contains("\"vertices\": []"));
    }

    #[test]
    fn rule_round_trip() {
        let rp = fixtures::spider_pattern();
        let back = parse_rule(&serialize_rule(&rp)).unwrap().rule;
        assert!(isomorphic(back.lhs.graph(), rp.lhs.graph()));
        assert!(isomorphic(back.rhs.graph(), rp.rhs.graph()));
        assert_eq!(back.i1.vertices, rp.i1.vertices);
        assert_eq!(back.i2.vertices, rp.i2.vertices);
    }
}
