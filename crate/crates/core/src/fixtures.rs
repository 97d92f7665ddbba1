//! Small named graphs, patterns and rules used throughout the tests, the
//! acceptance suite and the bundled JSON fixtures.
//!
//! The spider and path-counting rules are reconstructions: they are the
//! smallest rules with the stated shape and behaviour (merge two connected
//! spiders; contract a path between two overlapping boxes).

use crate::graph::{GraphMap, Signature, TypedGraph, VertexClass, VertexId};
use crate::pattern::{InstOp, Instantiation, PatternGraph};
use crate::rewriting::{RewritePattern, RewriteRule};

fn build(sig: Signature, vertices: &[(&str, VertexClass)], edges: &[(&str, &str, &str)]) -> TypedGraph {
    let mut g = TypedGraph::new(sig);
    for (v, c) in vertices {
        g.add_vertex(*v, c.clone()).expect("fixture vertex");
    }
    for (e, s, t) in edges {
        g.add_edge(*e, *s, *t).expect("fixture edge");
    }
    g
}

fn node() -> VertexClass {
    VertexClass::node("node")
}

fn wire() -> VertexClass {
    VertexClass::wire("wire")
}

/// STAR(k): one node `n` with `k` input wires `i1..ik`.
pub fn star(k: usize) -> TypedGraph {
    let mut g = TypedGraph::default();
    g.add_vertex("n", node()).unwrap();
    for j in 1..=k {
        g.add_vertex(format!("i{j}"), wire()).unwrap();
        g.add_edge(format!("e{j}"), format!("i{j}"), "n").unwrap();
    }
    g
}

/// W1: a single bare wire made of two wire-vertices.
pub fn w1() -> TypedGraph {
    build(Signature::default(), &[("wa", wire()), ("wb", wire())], &[("e", "wa", "wb")])
}

/// A bare wire of `n` wire-vertices `c1 -> ... -> cn`.
pub fn chain(n: usize) -> TypedGraph {
    let mut g = TypedGraph::default();
    for j in 1..=n {
        g.add_vertex(format!("c{j}"), wire()).unwrap();
        if j > 1 {
            g.add_edge(format!("e{}", j - 1), format!("c{}", j - 1), format!("c{j}")).unwrap();
        }
    }
    g
}

/// The pattern whose instances are exactly the stars. Stripping the box
/// gives `star(1)` on the nose.
pub fn bstar() -> PatternGraph {
    let g = build(
        Signature::default(),
        &[("n", node()), ("i1", wire()), ("b", VertexClass::Bang)],
        &[("e1", "i1", "n"), ("m", "b", "i1")],
    );
    PatternGraph::new(g).unwrap()
}

/// `b1` contains `b2`; both box the isolated wire-vertex `w`.
pub fn nested_pair() -> PatternGraph {
    let g = build(
        Signature::default(),
        &[("w", wire()), ("b1", VertexClass::Bang), ("b2", VertexClass::Bang)],
        &[("m1", "b1", "w"), ("m2", "b2", "w"), ("nest", "b1", "b2")],
    );
    PatternGraph::new(g).unwrap()
}

/// `b1` boxes inputs `w` and `x` of node `n`, `b2` boxes only `w`.
pub fn overlapping_pair() -> PatternGraph {
    let g = build(
        Signature::default(),
        &[("n", node()), ("w", wire()), ("x", wire()), ("b1", VertexClass::Bang), ("b2", VertexClass::Bang)],
        &[("e1", "w", "n"), ("e2", "x", "n"), ("m1", "b1", "w"), ("m2", "b1", "x"), ("m3", "b2", "w")],
    );
    PatternGraph::new(g).unwrap()
}

fn boxed(g: TypedGraph) -> PatternGraph {
    PatternGraph::new(g).expect("fixture pattern")
}

fn vid(s: &str) -> VertexId {
    VertexId::from(s)
}

/// Node kinds `X` and `Z`, one wire kind.
pub fn zx() -> Signature {
    Signature::new(["X", "Z"], ["wire"]).expect("disjoint")
}

fn z() -> VertexClass {
    VertexClass::node("Z")
}

/// Identity on a bare wire: `L = R = W1`, `p -> wa`, `q -> wb`.
pub fn identity_wire_rule() -> RewriteRule {
    let w = w1();
    let i = build(Signature::default(), &[("p", wire()), ("q", wire())], &[]);
    let legs = GraphMap { vertices: [(vid("p"), vid("wa")), (vid("q"), vid("wb"))].into(), edges: Default::default() };
    RewriteRule { name: "id-wire".into(), lhs: w.clone(), interface: i, rhs: w, i1: legs.clone(), i2: legs }
}

/// Cuts a wire: `W1` becomes two unconnected points. Both points are
/// inputs and outputs on the right but not on the left, so this span
/// fails the direction condition; it is still a fine thing to apply.
pub fn cut_rule() -> RewriteRule {
    let mut r = identity_wire_rule();
    r.name = "cut".into();
    r.rhs = build(Signature::default(), &[("wa", wire()), ("wb", wire())], &[]);
    r
}

/// Spider fusion: two `Z` nodes joined by one fixed wire `c0` and a box
/// `C` of further wires fuse into one node. Box `A` holds the first
/// spider's inputs, box `D` the second spider's outputs. On the right the
/// box `C` is empty.
pub fn spider_pattern() -> RewritePattern {
    let bang = VertexClass::Bang;
    let lhs = build(
        zx(),
        &[
            ("n1", z()),
            ("n2", z()),
            ("a", wire()),
            ("c0", wire()),
            ("c", wire()),
            ("d", wire()),
            ("A", bang.clone()),
            ("C", bang.clone()),
            ("D", bang.clone()),
        ],
        &[
            ("ia", "a", "n1"),
            ("c0i", "n1", "c0"),
            ("c0o", "c0", "n2"),
            ("ci", "n1", "c"),
            ("co", "c", "n2"),
            ("od", "n2", "d"),
            ("mA", "A", "a"),
            ("mC", "C", "c"),
            ("mD", "D", "d"),
        ],
    );
    let rhs = build(
        zx(),
        &[("n", z()), ("a", wire()), ("d", wire()), ("A", bang.clone()), ("C", bang.clone()), ("D", bang)],
        &[("ia", "a", "n"), ("od", "n", "d"), ("mA", "A", "a"), ("mD", "D", "d")],
    );
    let points = [(vid("a"), vid("a"), vid("a")), (vid("d"), vid("d"), vid("d"))];
    let boxes = [(vid("A"), vid("A")), (vid("C"), vid("C")), (vid("D"), vid("D"))];
    RewritePattern::from_span("spider", boxed(lhs), boxed(rhs), &points, &boxes).expect("fixture span")
}

/// The spider pattern instance with `a` inputs, `c` extra connecting wires
/// and `d` outputs, addressed by interface !-vertices.
pub fn spider_instantiation(a: usize, c: usize, d: usize) -> Instantiation {
    expansion(&spider_pattern().interface, &[("A", a), ("C", c), ("D", d)])
}

/// The canonical instantiation expanding each listed top-level box the
/// given number of times and then killing it. Fresh ids are recorded.
pub fn expansion(p: &PatternGraph, counts: &[(&str, usize)]) -> Instantiation {
    let mut cur = p.clone();
    let mut ops = Vec::new();
    for (b, k) in counts {
        for _ in 0..*k {
            let op = InstOp::copy(*b);
            let (next, map) = cur.apply_with_map(&op).expect("copy");
            let fresh = map.vertices[&vid(b)].clone();
            cur = next.drop_box(&fresh).expect("drop");
            ops.push(InstOp::Copy { bang: vid(b), fresh: Some(fresh.clone()) });
            ops.push(InstOp::Drop(fresh));
        }
        cur = cur.kill_box(&vid(b)).expect("kill");
        ops.push(InstOp::kill(*b));
    }
    Instantiation::new(ops)
}

/// Two `Z` spiders, each with two boundary wires, joined by two wires.
pub fn two_spiders() -> TypedGraph {
    build(
        zx(),
        &[
            ("z1", z()),
            ("z2", z()),
            ("i1", wire()),
            ("i2", wire()),
            ("c1", wire()),
            ("c2", wire()),
            ("o1", wire()),
            ("o2", wire()),
        ],
        &[
            ("e1", "i1", "z1"),
            ("e2", "i2", "z1"),
            ("e3", "z1", "c1"),
            ("e4", "c1", "z2"),
            ("e5", "z1", "c2"),
            ("e6", "c2", "z2"),
            ("e7", "z2", "o1"),
            ("e8", "z2", "o2"),
        ],
    )
}

/// Two `Z` spiders with one input and one output each and nothing between.
pub fn disconnected_spiders() -> TypedGraph {
    build(
        zx(),
        &[("z1", z()), ("z2", z()), ("i1", wire()), ("i2", wire()), ("o1", wire()), ("o2", wire())],
        &[("e1", "i1", "z1"), ("e2", "z1", "o1"), ("e3", "i2", "z2"), ("e4", "z2", "o2")],
    )
}

/// `n` `Z` spiders in a row, each joined to the next by one wire, with an
/// input at the start and an output at the end.
pub fn spider_chain(n: usize) -> TypedGraph {
    let mut g = TypedGraph::new(zx());
    g.add_vertex("in", wire()).unwrap();
    g.add_vertex("out", wire()).unwrap();
    for j in 1..=n {
        g.add_vertex(format!("z{j}"), z()).unwrap();
        if j > 1 {
            let w = format!("w{}", j - 1);
            g.add_vertex(w.as_str(), wire()).unwrap();
            g.add_edge(format!("{w}i"), format!("z{}", j - 1), w.as_str()).unwrap();
            g.add_edge(format!("{w}o"), w.as_str(), format!("z{j}")).unwrap();
        }
    }
    if n > 0 {
        g.add_edge("ein", "in", "z1").unwrap();
        g.add_edge("eout", format!("z{n}"), "out").unwrap();
    }
    g
}

/// Path counting: `X` nodes `u` fed by inputs `x`, `X` nodes `v` feeding
/// outputs `y`, and a wire from every `u` to every `v`. One path
/// `x0 -> u0 -> v0 -> y0` is mandatory; box `B1` adds sources, `B2` adds
/// sinks, and the wire `w` between the added ones lies in both boxes, so
/// an instance joins every `u` to every `v`. On the right all inputs and
/// outputs meet at a single `Z` node.
pub fn path_count_pattern() -> RewritePattern {
    let bang = VertexClass::Bang;
    let x = VertexClass::node("X");
    let lhs = build(
        zx(),
        &[
            ("x0", wire()),
            ("u0", x.clone()),
            ("w00", wire()),
            ("v0", x.clone()),
            ("y0", wire()),
            ("x", wire()),
            ("u", x.clone()),
            ("wu", wire()),
            ("w", wire()),
            ("wv", wire()),
            ("v", x),
            ("y", wire()),
            ("B1", bang.clone()),
            ("B2", bang.clone()),
        ],
        &[
            ("ex0", "x0", "u0"),
            ("e00i", "u0", "w00"),
            ("e00o", "w00", "v0"),
            ("ey0", "v0", "y0"),
            ("ex", "x", "u"),
            ("eui", "u", "wu"),
            ("euo", "wu", "v0"),
            ("ewi", "u", "w"),
            ("ewo", "w", "v"),
            ("evi", "u0", "wv"),
            ("evo", "wv", "v"),
            ("ey", "v", "y"),
            ("m1x", "B1", "x"),
            ("m1u", "B1", "u"),
            ("m1wu", "B1", "wu"),
            ("m1w", "B1", "w"),
            ("m2w", "B2", "w"),
            ("m2wv", "B2", "wv"),
            ("m2v", "B2", "v"),
            ("m2y", "B2", "y"),
        ],
    );
    let rhs = build(
        zx(),
        &[("x0", wire()), ("x", wire()), ("h", z()), ("y0", wire()), ("y", wire()), ("B1", bang.clone()), ("B2", bang)],
        &[
            ("ex0", "x0", "h"),
            ("ex", "x", "h"),
            ("ey0", "h", "y0"),
            ("ey", "h", "y"),
            ("m1x", "B1", "x"),
            ("m2y", "B2", "y"),
        ],
    );
    let points = ["x0", "x", "y0", "y"].map(|p| (vid(p), vid(p), vid(p)));
    let boxes = [(vid("B1"), vid("B1")), (vid("B2"), vid("B2"))];
    RewritePattern::from_span("path-count", boxed(lhs), boxed(rhs), &points, &boxes).expect("fixture span")
}

/// BSTAR rewritten to itself.
pub fn identity_pattern() -> RewritePattern {
    let points = [(vid("i1"), vid("i1"), vid("i1"))];
    RewritePattern::from_span("id-star", bstar(), bstar(), &points, &[(vid("b"), vid("b"))]).expect("fixture span")
}

/// Depth-two trees: a root node `r`, branches `r -> w1 -> n1` in box `B1`,
/// leaves `n1 -> w2 -> n2` in box `B2`, with `B2`'s contents inside `B1`.
/// With `nested` the edge `B1 -> B2` makes each branch choose its own
/// number of leaves; without it every branch gets the same number.
pub fn tree_pattern(nested: bool) -> PatternGraph {
    let bang = VertexClass::Bang;
    let mut edges = vec![
        ("e1", "r", "w1"),
        ("e2", "w1", "n1"),
        ("e3", "n1", "w2"),
        ("e4", "w2", "n2"),
        ("m1", "B1", "w1"),
        ("m2", "B1", "n1"),
        ("m3", "B1", "w2"),
        ("m4", "B1", "n2"),
        ("m5", "B2", "w2"),
        ("m6", "B2", "n2"),
    ];
    if nested {
        edges.push(("nest", "B1", "B2"));
    }
    let g = build(
        Signature::default(),
        &[
            ("r", node()),
            ("w1", wire()),
            ("n1", node()),
            ("w2", wire()),
            ("n2", node()),
            ("B1", bang.clone()),
            ("B2", bang),
        ],
        &edges,
    );
    boxed(g)
}
