//! The JSON fixture files are the serialized form of the `fixtures`
//! module. Run with `BANGBOX_BLESS=1` to regenerate them.

mod common;

use std::fs;

use bangbox::io::{parse_graph, parse_rule, serialize_graph, serialize_rule};
use bangbox::iso::isomorphic;
use bangbox::rewriting::validate_rewrite_pattern;

use common::corpus;

fn check(rel: &str, text: &str) {
    let path = corpus::fixture_dir().join(format!("{rel}.json"));
    if std::env::var_os("BANGBOX_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, text).unwrap();
        return;
    }
    let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(on_disk, text, "{} is stale; rerun with BANGBOX_BLESS=1", path.display());
}

#[test]
fn graph_files_match_the_fixtures() {
    for (name, g) in corpus::graphs() {
        check(&format!("graphs/{name}"), &serialize_graph(&g));
    }
}

#[test]
fn rule_files_match_the_fixtures() {
    for (name, rp) in corpus::rules() {
        check(name, &serialize_rule(&rp));
    }
}

#[test]
fn corpus_loads_clean() {
    for (name, g) in corpus::graphs() {
        let text = fs::read_to_string(corpus::fixture_dir().join(format!("graphs/{name}.json"))).unwrap();
        let parsed = parse_graph(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(parsed.completions.is_empty(), "{name}");
        assert!(isomorphic(parsed.graph.graph(), &g), "{name}");
    }
    for (name, _) in corpus::rules() {
        let text = fs::read_to_string(corpus::fixture_dir().join(format!("{name}.json"))).unwrap();
        let parsed = parse_rule(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(validate_rewrite_pattern(&parsed.rule), vec![], "{name}");
    }
}
