//! Property tests over randomly generated patterns and hosts.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use bangbox::enumerate::enumerate_instances;
use bangbox::io::{parse_graph, serialize_graph};
use bangbox::iso::isomorphic;
use bangbox::pattern::validate_pattern;
use bangbox::rewriting::{apply_rewrite, rewrite_with_pattern, validate_rewrite_pattern};
use bangbox::{find_string_matchings, fixtures, InstOp, RewritePattern, TypedGraph};

use common::{corpus, ops, oracles, random};

fn small_host(seed: u64, max_sigma: usize) -> TypedGraph {
    random::string_graph(&mut random::rng(seed), max_sigma).0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn op_sequences_stay_valid(seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let mut p = random::pattern(seed, 8, 3);
        for pick in picks {
            let ops = ops::applicable(&p);
            if ops.is_empty() {
                break;
            }
            p = p.apply(pick.get(&ops)).unwrap();
            prop_assert_eq!(validate_pattern(p.graph()), vec![]);
        }
    }

    #[test]
    fn open_sets_form_a_lattice(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (g, wires) = random::string_graph(&mut rng, 10);
        let a = random::open_set(&mut rng, &g, &wires, None);
        let b = random::open_set(&mut rng, &g, &wires, None);
        let whole = oracles::all_of(&g);
        for vs in [a.union(&b).cloned().collect::<BTreeSet<_>>(), a.intersection(&b).cloned().collect()] {
            prop_assert!(oracles::is_open_in(&g, (&whole.0, &whole.1), (&vs, &oracles::full_on(&g, &vs))));
        }
    }

    #[test]
    fn library_openness_agrees_with_oracle(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (g, _) = random::string_graph(&mut rng, 8);
        let h = random::subgraph(&mut rng, &g);
        let full = bangbox::Subgraph::full(&g, h.vertices.iter().cloned());
        let whole = oracles::all_of(&g);
        let oracle = oracles::is_open_in(&g, (&whole.0, &whole.1), (&full.vertices, &full.edges));
        prop_assert_eq!(g.is_open_subgraph(&full).unwrap(), oracle);
    }

    #[test]
    fn matching_agrees_with_brute_force(ls in any::<u64>(), hs in any::<u64>()) {
        let l = small_host(ls, 4);
        let h = small_host(hs, 7);
        let lib: BTreeSet<_> = find_string_matchings(&l, &h).map(|m| oracles::raw(&m)).collect();
        prop_assert_eq!(lib, oracles::matchings(&l, &h));
    }

    #[test]
    fn matchings_reflect_the_boundary(ls in any::<u64>(), hs in any::<u64>()) {
        let l = small_host(ls, 4);
        let h = small_host(hs, 8);
        for m in find_string_matchings(&l, &h) {
            for v in l.vertex_ids() {
                let img = &m.vertices[v];
                prop_assert!(!h.is_input(img) || l.is_input(v));
                prop_assert!(!h.is_output(img) || l.is_output(v));
            }
        }
    }

    #[test]
    fn dpo_squares_and_unique_complement(seed in any::<u64>()) {
        let host = small_host(seed, 12);
        for rp in [fixtures::spider_pattern(), corpus::boxless(fixtures::identity_wire_rule())] {
            for item in rewrite_with_pattern(&rp, &host, 0).take(4) {
                let (pm, t) = item.unwrap();
                let rule = rp.instantiate(&pm.instantiation).unwrap();
                prop_assert_eq!(t.check_squares(&rule), Ok(()));
                prop_assert_eq!(t.result.boundary().all(), host.boundary().all());
                let found = oracles::pushout_complements(&rule.interface, &rule.i1, &host, &pm.matching);
                prop_assert_eq!(found.len(), 1);
                let again = apply_rewrite(&rule, &host, &pm.matching, 0).unwrap();
                prop_assert!(isomorphic(&again.result, &t.result));
            }
        }
    }

    #[test]
    fn rewrite_pattern_ops_stay_valid(which in 0usize..5, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let mut rp: RewritePattern = corpus::rules().swap_remove(which).1;
        for pick in picks {
            let ops = ops::applicable_to_rule(&rp);
            if ops.is_empty() {
                break;
            }
            rp = rp.pattern_op(pick.get(&ops)).unwrap();
            prop_assert_eq!(validate_rewrite_pattern(&rp), vec![]);
        }
    }

    #[test]
    fn instantiation_is_coherent_with_the_left_side(a in 0usize..3, c in 0usize..3, d in 0usize..3) {
        let rp = fixtures::spider_pattern();
        let on_lhs = fixtures::expansion(&rp.lhs, &[("A", a), ("C", c), ("D", d)]);
        let direct = on_lhs.apply(&rp.lhs).unwrap();
        let (reached, on_interface) = rp.translate_lhs(&on_lhs).unwrap();
        prop_assert!(isomorphic(reached.lhs.graph(), direct.graph()));
        let rule = rp.instantiate(&on_interface).unwrap();
        prop_assert!(isomorphic(&rule.lhs, direct.graph()));
    }

    #[test]
    fn random_patterns_round_trip(seed in any::<u64>()) {
        let p = random::pattern(seed, 10, 4);
        let text = serialize_graph(p.graph());
        let back = parse_graph(&text).unwrap();
        prop_assert!(back.completions.is_empty());
        prop_assert!(isomorphic(back.graph.graph(), p.graph()));
        prop_assert_eq!(serialize_graph(back.graph.graph()), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// MERGE adds no instances beyond those of the canonical expansions.
    #[test]
    fn merged_instances_are_instances(seed in any::<u64>()) {
        let p = random::pattern(seed, 5, 3);
        let base: Vec<TypedGraph> = enumerate_instances(&p, 7).map(|(g, _)| g).collect();
        for op in ops::applicable(&p).into_iter().filter(|op| matches!(op, InstOp::Merge(..))) {
            let merged = p.apply(&op).unwrap();
            for (g, _) in enumerate_instances(&merged, 7) {
                prop_assert!(base.iter().any(|b| isomorphic(b, &g)), "{op} gives a new instance");
            }
        }
    }
}
