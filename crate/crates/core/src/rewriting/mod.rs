//! Rewrite rules, rewrite patterns and double-pushout rewriting.

mod dpo;
mod normalize;
mod pattern_rule;
mod rule;

use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, VertexId};
use crate::matching::MatchDefect;
use crate::pattern::{PatternError, PatternViolation};

pub use dpo::{apply_rewrite, pushout_complement, Complement, DpoTrace};
pub use normalize::{normalize, normalize_wires, Derivation, NormalizeOptions, Outcome, Strategy};
pub use pattern_rule::{rewrite_with_pattern, validate_rewrite_pattern, RewritePattern, RewriteResults};
pub use rule::{validate_rule, RewriteRule};

/// One of the three graphs of a span `L <- I -> R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Lhs,
    Interface,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Interface => "interface",
            Side::Rhs => "rhs",
        })
    }
}

/// A reason a span is not a rewrite rule or rewrite pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleViolation {
    NotStringGraph(Side),
    InvalidPattern {
        side: Side,
        violations: Vec<PatternViolation>,
    },
    InterfaceNotPointGraph,
    NotHomomorphism {
        side: Side,
        detail: String,
    },
    NotInjective(Side),
    /// An interface point lands off the boundary.
    NotOnBoundary {
        side: Side,
        point: VertexId,
        vertex: VertexId,
    },
    /// A boundary vertex no interface point reaches.
    BoundaryMissed {
        side: Side,
        vertex: VertexId,
    },
    /// `i1(p)` and `i2(p)` disagree on being an input (or an output).
    DirectionMismatch {
        point: VertexId,
        input: bool,
    },
    /// The !-vertex part of a leg is not an isomorphism.
    BangsNotIsomorphic {
        side: Side,
        detail: String,
    },
    /// The leg's preimage of a box differs from the interface box.
    BoxPreimage {
        side: Side,
        bang: VertexId,
    },
    /// Forgetting the boxes does not give a rewrite rule.
    Stripped(Box<RuleViolation>),
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::NotStringGraph(s) => write!(f, "{s} is not a string graph"),
            RuleViolation::InvalidPattern { side, violations } => {
                write!(f, "{side} is not a pattern graph: {}", crate::graph::join(violations))
            }
            RuleViolation::InterfaceNotPointGraph => f.write_str("interface is not a point graph"),
            RuleViolation::NotHomomorphism { side, detail } => {
                write!(f, "interface map into {side} is not a homomorphism: {detail}")
            }
            RuleViolation::NotInjective(s) => write!(f, "interface map into {s} is not injective"),
            RuleViolation::NotOnBoundary { side, point, vertex } => {
                write!(f, "point {point} maps to {vertex}, which is not on the {side} boundary")
            }
            RuleViolation::BoundaryMissed { side, vertex } => {
                write!(f, "{side} boundary vertex {vertex} is not in the interface")
            }
            RuleViolation::DirectionMismatch { point, input } => {
                let what = if *input { "input" } else { "output" };
                write!(f, "point {point} is an {what} on one side only")
            }
            RuleViolation::BangsNotIsomorphic { side, detail } => {
                write!(f, "!-vertices of interface and {side} differ: {detail}")
            }
            RuleViolation::BoxPreimage { side, bang } => {
                write!(f, "preimage of box {bang} in {side} differs from the interface box")
            }
            RuleViolation::Stripped(v) => write!(f, "without boxes: {v}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("not a matching: {0}")]
    InvalidMatching(#[from] MatchDefect),
    #[error("matched vertex {0} has edges outside the match")]
    Dangling(VertexId),
    #[error("{side}: {source}")]
    Side {
        side: Side,
        #[source]
        source: PatternError,
    },
    #[error("no interface !-vertex {0}")]
    UnknownBang(VertexId),
    #[error("instantiation leaves !-vertices: {}", crate::graph::join(.0))]
    Incomplete(Vec<VertexId>),
    #[error("step {index} ({op}): {source}")]
    Step {
        index: usize,
        op: String,
        #[source]
        source: Box<RewriteError>,
    },
    #[error("rewrite result is not a string graph")]
    ResultNotStringGraph,
    #[error("replayed left-hand side differs from the matched instance")]
    InstanceMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
}
