use std::collections::HashSet;

use certkernel_core::{Node, TermId, TermStore};
use certkernel_kernel::{ClauseId, CnfKind, CnfPayload, Payload, RuleKind};

use crate::builder::ProofBuilder;

/// Every clausification lemma that applies to `t` itself.
pub fn lemmas_for(store: &TermStore, t: TermId) -> Vec<(CnfKind, usize)> {
    use CnfKind::*;
    let all = |kinds: &[CnfKind]| kinds.iter().map(|&k| (k, 0)).collect::<Vec<_>>();
    match store.node(t) {
        Node::And(args) => {
            let mut v: Vec<_> = (0..args.len()).map(|i| (AndPos, i)).collect();
            v.push((AndNeg, 0));
            v
        }
        Node::Or(args) => {
            let mut v: Vec<_> = (0..args.len()).map(|i| (OrNeg, i)).collect();
            v.push((OrPos, 0));
            v
        }
        Node::Not(_) => vec![(NotNot, 0), (NotNot, 1)],
        Node::Implies(_) => all(&[ImpPos, ImpNeg1, ImpNeg2]),
        Node::Xor(_) => all(&[XorPos1, XorPos2, XorNeg1, XorNeg2]),
        Node::Iff(_) => all(&[EquivPos1, EquivPos2, EquivNeg1, EquivNeg2]),
        Node::Ite(_) if store.is_bool(t) => all(&[ItePos1, ItePos2, IteNeg1, IteNeg2]),
        Node::True => all(&[ConstTrue]),
        Node::False => all(&[ConstFalse]),
        _ => Vec::new(),
    }
}

/// Boolean subterms of `t` that the lemmas of [`lemmas_for`] mention.
fn boolean_children(store: &TermStore, t: TermId) -> &[TermId] {
    match store.node(t) {
        Node::And(_)
        | Node::Or(_)
        | Node::Not(_)
        | Node::Implies(_)
        | Node::Xor(_)
        | Node::Iff(_) => store.node(t).children(),
        Node::Ite(c) if store.is_bool(t) => c,
        _ => &[],
    }
}

/// Emits every clausification lemma for every connective reachable from
/// the atoms of the clauses stored so far. Returns the new step ids.
pub fn clausify(store: &mut TermStore, b: &mut ProofBuilder) -> Vec<ClauseId> {
    let mut roots: Vec<TermId> = b
        .clauses()
        .flat_map(|(_, c)| c.lits().iter().map(|l| l.atom()).collect::<Vec<_>>())
        .collect();
    roots.sort();
    roots.dedup();
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut stack: Vec<TermId> = roots.into_iter().rev().collect();
    while let Some(t) = stack.pop() {
        if !seen.insert(t) {
            continue;
        }
        order.push(t);
        stack.extend(boolean_children(store, t).iter().rev());
    }
    let mut ids = Vec::new();
    for t in order {
        for (kind, index) in lemmas_for(store, t) {
            let payload = Payload::Cnf(CnfPayload { target: t, index });
            ids.push(b.must(store, RuleKind::Cnf(kind), vec![], payload));
        }
    }
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpll::refute;
    use certkernel_core::{Clause, Lit, Sort};
    use certkernel_kernel::check;

    #[test]
    fn refutes_non_clausal_inputs() {
        let mut s = TermStore::new();
        let p = s.var("p", Sort::Bool).unwrap();
        let q = s.var("q", Sort::Bool).unwrap();
        let x = s.xor(p, q).unwrap();
        let e = s.iff(p, q).unwrap();
        let f = TermId::FALSE;
        let imp = s.intern(Node::Implies([p, f])).unwrap();
        let both = s.and(vec![x, e]).unwrap();
        let or = s.or(vec![both, imp]).unwrap();
        let np = s.not(p).unwrap();
        let inputs = vec![
            Clause::from_lits([Lit::pos(or)]),
            Clause::from_lits([Lit::neg(np)]),
        ];
        let mut b = ProofBuilder::new(&s, &inputs);
        clausify(&mut s, &mut b);
        let id = refute(&mut s, &mut b, &[]).expect("unsat");
        assert!(b.clause(id).is_empty());
        assert!(check(&mut s, &inputs, &b.finish()).verdict.is_valid());
    }
}
