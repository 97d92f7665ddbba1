use bangbox::rewriting::Side;
use bangbox::{InstOp, PatternGraph, RewritePattern, VertexId};

/// Every single operation applicable to `p`.
pub fn applicable(p: &PatternGraph) -> Vec<InstOp> {
    let bangs: Vec<VertexId> = p.bangs().cloned().collect();
    let mut ops = Vec::new();
    for b in &bangs {
        ops.extend([InstOp::copy(b.clone()), InstOp::drop(b.clone()), InstOp::kill(b.clone())]);
        for b2 in &bangs {
            if b != b2 && p.check_mergeable(b, b2).is_ok() {
                ops.push(InstOp::merge(b.clone(), b2.clone()));
            }
        }
    }
    ops
}

/// Operations applicable on all three sides of `rp`, addressed by
/// interface !-vertices.
pub fn applicable_to_rule(rp: &RewritePattern) -> Vec<InstOp> {
    let mergeable = |a: &VertexId, b: &VertexId| {
        [(Side::Lhs, &rp.lhs), (Side::Rhs, &rp.rhs)].into_iter().all(|(s, p)| {
            matches!((rp.bang_on(s, a), rp.bang_on(s, b)), (Ok(x), Ok(y)) if p.check_mergeable(&x, &y).is_ok())
        })
    };
    applicable(&rp.interface)
        .into_iter()
        .filter(|op| match op {
            InstOp::Merge(a, b) => mergeable(a, b),
            _ => true,
        })
        .collect()
}
