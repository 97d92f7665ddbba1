//! End-to-end rewriting scenarios on the bundled rules.

mod common;

use bangbox::iso::isomorphic;
use bangbox::rewriting::{normalize, normalize_wires, rewrite_with_pattern, NormalizeOptions, Outcome};
use bangbox::{fixtures, TypedGraph, VertexClass};

/// The complete bipartite instance with `m` sources and `n` sinks.
fn path_count_host(m: usize, n: usize) -> TypedGraph {
    let rp = fixtures::path_count_pattern();
    fixtures::expansion(&rp.lhs, &[("B1", m - 1), ("B2", n - 1)]).apply(&rp.lhs).unwrap().into_graph()
}

#[test]
fn path_counting_collapses_to_one_spider() {
    let rp = fixtures::path_count_pattern();
    for (m, n) in [(1, 1), (2, 1), (2, 2), (1, 3)] {
        let host = path_count_host(m, n);
        let (_, t) = rewrite_with_pattern(&rp, &host, 0).next().expect("a match").unwrap();
        let nodes: Vec<_> = t.result.vertices().filter(|(_, c)| c.is_node()).collect();
        assert_eq!(nodes.len(), 1, "({m}, {n})");
        assert_eq!(nodes[0].1, &VertexClass::node("Z"));
        let b = t.result.boundary();
        assert_eq!((b.inputs.len(), b.outputs.len()), (m, n), "({m}, {n})");
    }
}

#[test]
fn path_counting_needs_complete_bipartite_paths() {
    // Drop one of the four middle wires: no instance of the pattern fits.
    let mut host = path_count_host(2, 2);
    assert!(rewrite_with_pattern(&fixtures::path_count_pattern(), &host, 0).next().is_some());
    let w = host.wire_vertices().find(|w| host.in_degree(w) == 1 && host.out_degree(w) == 1).unwrap().clone();
    host.remove_vertex(&w);
    let rp = fixtures::path_count_pattern();
    assert!(rewrite_with_pattern(&rp, &host, 0).next().is_none());
}

#[test]
fn disconnected_spiders_do_not_fuse() {
    let rp = fixtures::spider_pattern();
    assert!(rewrite_with_pattern(&rp, &fixtures::disconnected_spiders(), 0).next().is_none());
}

#[test]
fn longer_chains_fuse_in_n_minus_one_steps() {
    let rp = fixtures::spider_pattern();
    for n in 1..=5 {
        let d = normalize(&fixtures::spider_chain(n), std::slice::from_ref(&rp), NormalizeOptions::default()).unwrap();
        assert_eq!(d.steps.len(), n - 1, "n = {n}");
        assert_eq!(d.outcome, Outcome::NormalForm);
        assert!(isomorphic(&normalize_wires(&d.graph), &normalize_wires(&fixtures::spider_chain(1))));
    }
}

#[test]
fn identity_rule_hits_the_step_limit() {
    let rp = common::corpus::boxless(fixtures::identity_wire_rule());
    let opts = NormalizeOptions { max_steps: 7, ..Default::default() };
    let d = normalize(&fixtures::chain(3), &[rp], opts).unwrap();
    assert_eq!(d.steps.len(), 7);
    assert_eq!(d.outcome, Outcome::StepLimit);
    assert!(isomorphic(&d.graph, &fixtures::chain(3)));
}

#[test]
fn derivations_replay_identically() {
    let rp = fixtures::spider_pattern();
    let run = || normalize(&fixtures::spider_chain(4), std::slice::from_ref(&rp), NormalizeOptions::default()).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.steps.len(), b.steps.len());
}
