use crate::graph::{TypedGraph, VertexId};

use super::{rewrite_with_pattern, DpoTrace, RewriteError, RewritePattern};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Try rules in order; apply the first match of the first rule that has
    /// one.
    #[default]
    FirstRuleFirstMatch,
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    pub max_steps: usize,
    pub strategy: Strategy,
    /// Contract wires to minimal length before every matching attempt.
    /// This goes beyond plain matching, which is rigid about wire length.
    pub normalize_wires: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self { max_steps: 100, strategy: Strategy::default(), normalize_wires: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No rule matches the final graph.
    NormalForm,
    /// Stopped after `max_steps` with a match still available.
    StepLimit,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub steps: Vec<DpoTrace>,
    pub graph: TypedGraph,
    pub outcome: Outcome,
}

/// Rewrite until no rule applies or the step limit is reached.
pub fn normalize(h: &TypedGraph, rules: &[RewritePattern], opts: NormalizeOptions) -> Result<Derivation, RewriteError> {
    let Strategy::FirstRuleFirstMatch = opts.strategy;
    let prepare = |g: TypedGraph| if opts.normalize_wires { normalize_wires(&g) } else { g };
    let mut graph = prepare(h.clone());
    let mut steps = Vec::new();
    loop {
        let next = first_rewrite(&graph, rules, steps.len())?;
        let Some(trace) = next else {
            return Ok(Derivation { steps, graph, outcome: Outcome::NormalForm });
        };
        if steps.len() == opts.max_steps {
            return Ok(Derivation { steps, graph, outcome: Outcome::StepLimit });
        }
        graph = prepare(trace.result.clone());
        steps.push(trace);
    }
}

fn first_rewrite(g: &TypedGraph, rules: &[RewritePattern], step: usize) -> Result<Option<DpoTrace>, RewriteError> {
    for rp in rules {
        if let Some(item) = rewrite_with_pattern(rp, g, step).next() {
            return item.map(|(_, t)| Some(t));
        }
    }
    Ok(None)
}

/// Contract every wire to its shortest form: one wire-vertex between two
/// nodes or at a node's side of the boundary, two for a bare wire, one for
/// a loop. Of two adjacent wire-vertices the later one is removed, the
/// smallest id first, so the result is deterministic.
pub fn normalize_wires(g: &TypedGraph) -> TypedGraph {
    let mut g = g.clone();
    loop {
        let victim = g.wire_vertices().find_map(|v| {
            let e_in = g.in_edges(v).next()?.clone();
            let u = g.src(&e_in)?.clone();
            if u == *v || !g.is_wire(&u) {
                return None;
            }
            // Keep bare wires at two vertices.
            if g.is_input(&u) && g.is_output(v) {
                return None;
            }
            Some((v.clone(), e_in, u))
        });
        let Some((v, e_in, u)) = victim else {
            return g;
        };
        let out: Option<(crate::graph::EdgeId, VertexId)> =
            g.out_edges(&v).next().map(|e| (e.clone(), g.tgt(e).expect("present").clone()));
        g.remove_edge(&e_in);
        if let Some((e_out, w)) = out {
            g.remove_edge(&e_out);
            g.remove_vertex(&v);
            let w = if w == v { u.clone() } else { w };
            g.add_edge(e_out, u, w).expect("endpoints exist");
        } else {
            g.remove_vertex(&v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::isomorphic;

    #[test]
    fn three_spiders_fuse_in_two_steps() {
        let d =
            normalize(&fixtures::spider_chain(3), &[fixtures::spider_pattern()], NormalizeOptions::default()).unwrap();
        assert_eq!(d.steps.len(), 2);
        assert_eq!(d.outcome, Outcome::NormalForm);
        assert_eq!(d.graph.node_vertices().count(), 1);
    }

    #[test]
    fn no_rules_no_steps() {
        let h = fixtures::star(2);
        let d = normalize(&h, &[], NormalizeOptions::default()).unwrap();
        assert!(d.steps.is_empty());
        assert_eq!(d.graph, h);
    }

    #[test]
    fn identity_rule_hits_the_limit() {
        let h = fixtures::star(2);
        let opts = NormalizeOptions { max_steps: 5, ..Default::default() };
        let d = normalize(&h, &[fixtures::identity_pattern()], opts).unwrap();
        assert_eq!(d.steps.len(), 5);
        assert_eq!(d.outcome, Outcome::StepLimit);
        assert!(isomorphic(&d.graph, &h));
    }

    #[test]
    fn wire_contraction() {
        assert!(isomorphic(&normalize_wires(&fixtures::chain(5)), &fixtures::chain(2)));
        assert!(isomorphic(&normalize_wires(&fixtures::chain(2)), &fixtures::chain(2)));
        let mut g = fixtures::star(1);
        g.add_vertex("x", crate::graph::VertexClass::wire("wire")).unwrap();
        g.add_edge("f", "x", "i1").unwrap();
        assert!(isomorphic(&normalize_wires(&g), &fixtures::star(1)));
        let mut loop2 = fixtures::chain(2);
        loop2.add_edge("back", "c2", "c1").unwrap();
        let n = normalize_wires(&loop2);
        assert_eq!((n.vertex_count(), n.edge_count()), (1, 1));
    }
}
