//! Propositional small checkers: resolution chains and clausification lemmas.

use certkernel_core::{Clause, Lit, Node, TermId, TermStore};

use crate::certificate::CnfKind;
use crate::{reject, Rejection};

/// Target of a clausification lemma. `index` selects the argument for
/// `and_pos`/`or_neg` and the direction for `not_not`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnfPayload {
    pub target: TermId,
    pub index: usize,
}

/// Binary resolution with an inferred pivot.
///
/// The pivot is the smallest atom occurring positively in one clause and
/// negatively in the other. Returns `[pos true]` when there is none.
pub fn resolve_pair(c1: &Clause, c2: &Clause) -> Clause {
    try_resolve_pair(c1, c2).unwrap_or_else(|_| Clause::trivially_true())
}

pub fn try_resolve_pair(c1: &Clause, c2: &Clause) -> Result<Clause, Rejection> {
    // Both clauses are sorted by literal code, so the first hit has the
    // smallest atom.
    let Some(&pivot) = c1.lits().iter().find(|l| c2.contains(l.negate())) else {
        return reject("no complementary pivot between the premises");
    };
    if c1.contains(pivot.negate()) && c2.contains(pivot) {
        return reject(format!(
            "both premises contain both polarities of pivot {}",
            pivot.atom()
        ));
    }
    let mut lits: Vec<Lit> = Vec::with_capacity(c1.len() + c2.len() - 2);
    lits.extend(c1.lits().iter().copied().filter(|&l| l != pivot));
    lits.extend(c2.lits().iter().copied().filter(|&l| l != pivot.negate()));
    Ok(Clause::from_lits(lits))
}

/// Left fold of [`resolve_pair`] over the premises.
pub fn resolve_chain(premises: &[&Clause]) -> Clause {
    try_resolve_chain(premises).unwrap_or_else(|_| Clause::trivially_true())
}

pub fn try_resolve_chain(premises: &[&Clause]) -> Result<Clause, Rejection> {
    let Some((first, rest)) = premises.split_first() else {
        return reject("resolution needs at least one premise");
    };
    let mut acc = (*first).clone();
    for (i, c) in rest.iter().enumerate() {
        acc = try_resolve_pair(&acc, c)
            .map_err(|r| Rejection::new(format!("resolution with premise #{}: {r}", i + 1)))?;
    }
    Ok(acc)
}

/// The clausification lemma of `kind` for `payload.target`, or `[pos true]`.
pub fn cnf_lemma(store: &TermStore, kind: CnfKind, payload: &CnfPayload) -> Clause {
    try_cnf_lemma(store, kind, payload).unwrap_or_else(|_| Clause::trivially_true())
}

pub fn try_cnf_lemma(
    store: &TermStore,
    kind: CnfKind,
    payload: &CnfPayload,
) -> Result<Clause, Rejection> {
    let t = payload.target;
    if !store.is_valid(t) {
        return reject(format!("target {t} is not in the term store"));
    }
    let node = store.node(t);
    let mismatch = || {
        reject(format!(
            "{} does not apply to a `{}` term",
            kind.name(),
            node.kind_name()
        ))
    };
    let (p, n) = (Lit::pos, Lit::neg);
    let lits: Vec<Lit> = match (kind, node) {
        (CnfKind::AndPos, Node::And(args)) => {
            let Some(&a) = args.get(payload.index) else {
                return reject(format!("and_pos index {} out of range", payload.index));
            };
            vec![n(t), p(a)]
        }
        (CnfKind::AndNeg, Node::And(args)) => std::iter::once(p(t))
            .chain(args.iter().map(|&a| n(a)))
            .collect(),
        (CnfKind::OrPos, Node::Or(args)) => std::iter::once(n(t))
            .chain(args.iter().map(|&a| p(a)))
            .collect(),
        (CnfKind::OrNeg, Node::Or(args)) => {
            let Some(&a) = args.get(payload.index) else {
                return reject(format!("or_neg index {} out of range", payload.index));
            };
            vec![p(t), n(a)]
        }
        (CnfKind::ImpPos, &Node::Implies([a, b])) => vec![n(t), n(a), p(b)],
        (CnfKind::ImpNeg1, &Node::Implies([a, _])) => vec![p(t), p(a)],
        (CnfKind::ImpNeg2, &Node::Implies([_, b])) => vec![p(t), n(b)],
        (CnfKind::XorPos1, &Node::Xor([a, b])) => vec![n(t), p(a), p(b)],
        (CnfKind::XorPos2, &Node::Xor([a, b])) => vec![n(t), n(a), n(b)],
        (CnfKind::XorNeg1, &Node::Xor([a, b])) => vec![p(t), p(a), n(b)],
        (CnfKind::XorNeg2, &Node::Xor([a, b])) => vec![p(t), n(a), p(b)],
        (CnfKind::EquivPos1, &Node::Iff([a, b])) => vec![n(t), p(a), n(b)],
        (CnfKind::EquivPos2, &Node::Iff([a, b])) => vec![n(t), n(a), p(b)],
        (CnfKind::EquivNeg1, &Node::Iff([a, b])) => vec![p(t), n(a), n(b)],
        (CnfKind::EquivNeg2, &Node::Iff([a, b])) => vec![p(t), p(a), p(b)],
        (kind, &Node::Ite([c, a, b])) if store.is_bool(t) => match kind {
            CnfKind::ItePos1 => vec![n(t), p(c), p(b)],
            CnfKind::ItePos2 => vec![n(t), n(c), p(a)],
            CnfKind::IteNeg1 => vec![p(t), p(c), n(b)],
            CnfKind::IteNeg2 => vec![p(t), n(c), n(a)],
            _ => return mismatch(),
        },
        (CnfKind::NotNot, &Node::Not(a)) => match payload.index {
            0 => vec![n(t), n(a)],
            1 => vec![p(t), p(a)],
            i => return reject(format!("not_not direction {i} must be 0 or 1")),
        },
        (CnfKind::ConstTrue, Node::True) => vec![p(t)],
        (CnfKind::ConstFalse, Node::False) => vec![n(t)],
        _ => return mismatch(),
    };
    Ok(Clause::from_lits(lits))
}
