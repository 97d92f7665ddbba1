//! String graphs, !-box pattern graphs and double-pushout rewriting.
//!
//! - [`graph`]: typed graphs, string graphs, boundaries, open subgraphs.
//! - [`pattern`]: !-boxes and the COPY / DROP / KILL / MERGE operations.
//! - [`enumerate`]: bounded enumeration of a pattern's concrete instances.
//! - [`iso`]: graph isomorphism.
//! - [`matching`]: string-graph and pattern matching.
//! - [`io`]: JSON documents and Graphviz export.
//! - [`rewriting`]: rewrite rules and patterns, DPO rewriting, normalization.

pub mod cli;
pub mod enumerate;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod iso;
pub mod matching;
pub mod pattern;
pub mod rewriting;

pub use enumerate::{enumerate_instances, is_instance};
pub use graph::{Edge, EdgeId, GraphError, GraphMap, Signature, Subgraph, TypedGraph, VertexClass, VertexId};
pub use matching::{find_pattern_matchings, find_string_matchings, verify_matching, Matching, PatternMatch};
pub use pattern::{InstOp, Instantiation, PatternError, PatternGraph};
pub use rewriting::{apply_rewrite, normalize, RewritePattern, RewriteRule};
