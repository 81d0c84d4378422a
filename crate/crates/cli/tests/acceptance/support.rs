//! Semantic helpers shared by the criteria.

use std::collections::HashMap;

use certkernel_core::{BvValue, Clause, Lit, Node, Sort, TermId, TermStore};
use certkernel_kernel::{BvPayload, Payload, RuleKind, Step};
use certkernel_oracle::Budget;

pub const BUDGET: Budget = Budget {
    max_assignments: 1 << 24,
    int_box: 10,
    max_domain: 3,
};

/// Boolean skeletons of `clauses` in a fresh store: connectives are kept and
/// every other atom becomes its own Boolean variable. Propositional validity
/// of the skeleton implies validity in every theory.
pub fn skeleton(store: &TermStore, clauses: &[Clause]) -> (TermStore, Vec<Clause>) {
    let mut out = TermStore::new();
    let mut memo: HashMap<TermId, TermId> = HashMap::new();
    let clauses = clauses
        .iter()
        .map(|c| {
            Clause::from_lits(
                c.lits()
                    .iter()
                    .map(|l| Lit::new(lift(store, &mut out, &mut memo, l.atom()), l.is_positive())),
            )
        })
        .collect();
    (out, clauses)
}

fn lift(
    store: &TermStore,
    out: &mut TermStore,
    memo: &mut HashMap<TermId, TermId>,
    t: TermId,
) -> TermId {
    if let Some(&u) = memo.get(&t) {
        return u;
    }
    let node = store.node(t);
    let connective = match node {
        Node::True
        | Node::False
        | Node::Not(_)
        | Node::And(_)
        | Node::Or(_)
        | Node::Implies(_)
        | Node::Xor(_)
        | Node::Iff(_) => true,
        Node::Ite(_) => store.sort_of(t) == &Sort::Bool,
        _ => false,
    };
    let u = if connective {
        let kids: HashMap<TermId, TermId> = node
            .children()
            .iter()
            .map(|&c| (c, lift(store, out, memo, c)))
            .collect();
        out.intern(node.map_children(|c| kids[&c]))
            .expect("same sorts as the source")
    } else {
        out.var(&format!("@atom{}", t.index()), Sort::Bool)
            .expect("fresh name")
    };
    memo.insert(t, u);
    u
}

/// Replaces the variables in `map` everywhere under `t`.
pub fn substitute(
    store: &mut TermStore,
    map: &HashMap<TermId, TermId>,
    memo: &mut HashMap<TermId, TermId>,
    t: TermId,
) -> TermId {
    if let Some(&u) = map.get(&t).or_else(|| memo.get(&t)) {
        return u;
    }
    let node = store.node(t).clone();
    let kids: Vec<TermId> = node.children().to_vec();
    let mut new = HashMap::new();
    for c in kids {
        let u = substitute(store, map, memo, c);
        new.insert(c, u);
    }
    let u = store
        .intern(node.map_children(|c| new[&c]))
        .expect("substitution keeps sorts");
    memo.insert(t, u);
    u
}

pub fn substitute_clause(
    store: &mut TermStore,
    map: &HashMap<TermId, TermId>,
    c: &Clause,
) -> Clause {
    let mut memo = HashMap::new();
    let lits: Vec<Lit> = c
        .lits()
        .iter()
        .map(|l| Lit::new(substitute(store, map, &mut memo, l.atom()), l.is_positive()))
        .collect();
    Clause::from_lits(lits)
}

fn bv_const(store: &mut TermStore, v: u128, w: u32) -> TermId {
    store
        .intern(Node::BvConst(BvValue::from_u128(v, w)))
        .expect("constant")
}

/// `bit i of t is set`, as a word-level formula.
pub fn bit_of(store: &mut TermStore, t: TermId, i: u32) -> TermId {
    let w = store.sort_of(t).bv_width().expect("bit-vector term");
    let m = bv_const(store, 1 << i, w);
    let and = store.intern(Node::BvAnd([t, m])).expect("bvand");
    store.intern(Node::Eq([and, m])).expect("equality")
}

/// The intended value of every fresh variable a bit-blasting step
/// introduces: bit `i` of a variable, or the carry into bit `i` of a sum.
pub fn record_extension(store: &mut TermStore, step: &Step, ext: &mut HashMap<TermId, TermId>) {
    let Payload::Bv(BvPayload { target, aux }) = &step.payload else {
        return;
    };
    match (step.rule, store.node(*target).clone()) {
        (RuleKind::BbVar, Node::Var(..)) => {
            for (i, &b) in aux.iter().enumerate() {
                let def = bit_of(store, *target, i as u32);
                ext.insert(b, def);
            }
        }
        (RuleKind::BbAdd, Node::BvAdd([x, y])) => {
            let w = store.sort_of(*target).bv_width().expect("bit-vector sum");
            for (i, &c) in aux.iter().enumerate() {
                let low = bv_const(store, (1u128 << i) - 1, w);
                let xl = store.intern(Node::BvAnd([x, low])).expect("bvand");
                let yl = store.intern(Node::BvAnd([y, low])).expect("bvand");
                let sum = store.intern(Node::BvAdd([xl, yl])).expect("bvadd");
                let def = bit_of(store, sum, i as u32);
                ext.insert(c, def);
            }
        }
        _ => {}
    }
}

/// Number of distinct non-connective atoms under a clause.
pub fn atom_count(store: &TermStore, c: &Clause) -> usize {
    let (s, _) = skeleton(store, std::slice::from_ref(c));
    s.iter().filter(|(_, n)| matches!(n, Node::Var(..))).count()
}
