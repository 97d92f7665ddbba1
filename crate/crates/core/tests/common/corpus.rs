use std::path::PathBuf;

use bangbox::fixtures;
use bangbox::rewriting::RewritePattern;
use bangbox::TypedGraph;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Every named graph of the on-disk corpus, with its file stem.
pub fn graphs() -> Vec<(&'static str, TypedGraph)> {
    vec![
        ("star0", fixtures::star(0)),
        ("star1", fixtures::star(1)),
        ("star2", fixtures::star(2)),
        ("star3", fixtures::star(3)),
        ("w1", fixtures::w1()),
        ("chain3", fixtures::chain(3)),
        ("bstar", fixtures::bstar().into_graph()),
        ("nested", fixtures::nested_pair().into_graph()),
        ("overlapping", fixtures::overlapping_pair().into_graph()),
        ("tree_nested", fixtures::tree_pattern(true).into_graph()),
        ("tree_flat", fixtures::tree_pattern(false).into_graph()),
        ("two_spiders", fixtures::two_spiders()),
        ("disconnected_spiders", fixtures::disconnected_spiders()),
        ("spider_chain3", fixtures::spider_chain(3)),
        ("empty", TypedGraph::default()),
    ]
}

/// Every rewrite pattern of the on-disk corpus, with its relative path.
pub fn rules() -> Vec<(&'static str, RewritePattern)> {
    vec![
        ("rules/spider", fixtures::spider_pattern()),
        ("rules/path_count", fixtures::path_count_pattern()),
        ("rules/identity_star", fixtures::identity_pattern()),
        ("rules/identity_wire", boxless(fixtures::identity_wire_rule())),
        ("zx-rules/spider", fixtures::spider_pattern()),
    ]
}

pub fn boxless(r: bangbox::RewriteRule) -> RewritePattern {
    RewritePattern {
        name: r.name,
        lhs: bangbox::PatternGraph::new(r.lhs).unwrap(),
        interface: bangbox::PatternGraph::new(r.interface).unwrap(),
        rhs: bangbox::PatternGraph::new(r.rhs).unwrap(),
        i1: r.i1,
        i2: r.i2,
    }
}
