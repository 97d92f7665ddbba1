//! JSON documents for graphs and rules, and Graphviz export.

mod document;
mod dot;

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, VertexId};
use crate::pattern::PatternViolation;
use crate::rewriting::{RewriteError, RuleViolation};

pub use document::{
    parse_graph, parse_rule, serialize_graph, serialize_rule, to_json, BoxDoc, BoxPairDoc, ClassDoc, Completion,
    CompletionReason, EdgeDoc, GraphDocument, ParsedGraph, ParsedRule, PointDoc, RuleDocument, SignatureDoc, VertexDoc,
};
pub use dot::export_dot;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0} touches a !-vertex; give box membership under \"boxes\"")]
    BangEdge(EdgeId),
    #[error("{0} is not a !-vertex")]
    NotABang(VertexId),
    #[error("not a pattern graph: {}", crate::graph::join(.0))]
    InvalidPattern(Vec<PatternViolation>),
    #[error("not a rewrite pattern: {}", crate::graph::join(.0))]
    InvalidRule(Vec<RuleViolation>),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

impl IoError {
    /// 3 for unreadable input, 1 for input that reads but does not validate.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Json { .. } | IoError::File { .. } => 3,
            _ => 1,
        }
    }
}
