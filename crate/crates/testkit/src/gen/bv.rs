use std::collections::HashMap;

use certkernel_core::{BvValue, Node, Sort, TermId, TermStore};
use certkernel_frontend::{Logic, Problem};
use certkernel_kernel::{BitOp, BvPayload, ClauseId, Payload, RuleKind};
use rand::Rng;

use super::{assert, certify, declare, new_problem, Instance};
use crate::builder::ProofBuilder;

fn random_term<R: Rng>(
    rng: &mut R,
    store: &mut TermStore,
    vars: &[TermId],
    width: u32,
    depth: u32,
) -> TermId {
    if depth == 0 || rng.gen_bool(0.3) {
        if rng.gen_bool(0.2) {
            let v = rng.gen_range(0..1u128 << width);
            return store
                .intern(Node::BvConst(BvValue::from_u128(v, width)))
                .expect("constant");
        }
        return vars[rng.gen_range(0..vars.len())];
    }
    let sub = |rng: &mut R, store: &mut TermStore| random_term(rng, store, vars, width, depth - 1);
    let node = match rng.gen_range(0..5) {
        0 => Node::BvNot(sub(rng, store)),
        1 => Node::BvAnd([sub(rng, store), sub(rng, store)]),
        2 => Node::BvOr([sub(rng, store), sub(rng, store)]),
        3 => Node::BvXor([sub(rng, store), sub(rng, store)]),
        _ => Node::BvAdd([sub(rng, store), sub(rng, store)]),
    };
    store.intern(node).expect("same-width operands")
}

/// An equivalent term: operands swapped or a double negation added.
fn rewrite<R: Rng>(rng: &mut R, store: &mut TermStore, t: TermId) -> TermId {
    let node = match *store.node(t) {
        Node::BvAnd([a, b]) => Node::BvAnd([b, a]),
        Node::BvOr([a, b]) => Node::BvOr([b, a]),
        Node::BvXor([a, b]) => Node::BvXor([b, a]),
        Node::BvAdd([a, b]) => Node::BvAdd([b, a]),
        _ if rng.gen_bool(0.5) => {
            let n = store.intern(Node::BvNot(t)).expect("bv");
            Node::BvNot(n)
        }
        _ => {
            // t + 0
            let w = store.sort_of(t).bv_width().expect("bit-vector term");
            let zero = store
                .intern(Node::BvConst(BvValue::from_u128(0, w)))
                .expect("constant");
            Node::BvAdd([t, zero])
        }
    };
    store.intern(node).expect("same-width operands")
}

fn random_atom<R: Rng>(rng: &mut R, store: &mut TermStore, vars: &[TermId], width: u32) -> TermId {
    let s = random_term(rng, store, vars, width, 2);
    let t = random_term(rng, store, vars, width, 2);
    let node = if rng.gen_bool(0.5) {
        Node::Eq([s, t])
    } else {
        Node::BvUlt([s, t])
    };
    store.intern(node).expect("comparison")
}

/// Appends bit-blasting steps for every bit-vector term and atom under the
/// input atoms. Returns the bits of the variables.
pub fn bitblast(p: &mut Problem, b: &mut ProofBuilder) -> Vec<TermId> {
    let roots: Vec<TermId> = p
        .inputs
        .iter()
        .flat_map(|c| c.lits().iter().map(|l| l.atom()))
        .collect();
    // Post-order over the term DAG.
    let mut order = Vec::new();
    let mut state: HashMap<TermId, bool> = HashMap::new();
    let mut stack: Vec<(TermId, bool)> = roots.into_iter().rev().map(|t| (t, false)).collect();
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            state.insert(t, true);
            order.push(t);
            continue;
        }
        if state.contains_key(&t) {
            continue;
        }
        state.insert(t, false);
        stack.push((t, true));
        for &c in store_children(&p.store, t).iter().rev() {
            stack.push((c, false));
        }
    }
    let mut defined: HashMap<TermId, ClauseId> = HashMap::new();
    let mut var_bits = Vec::new();
    let mut adds = 0;
    for t in order {
        let store = &mut p.store;
        let is_bv = store.sort_of(t).bv_width().is_some();
        let node = store.node(t).clone();
        let prem = |xs: &[TermId]| xs.iter().map(|x| defined[x]).collect::<Vec<_>>();
        let (rule, premises, aux) = match node {
            Node::Var(ref name, Sort::BitVec(w)) => {
                let bits: Vec<TermId> = (0..w)
                    .map(|i| {
                        store
                            .var(&format!("{name}.b{i}"), Sort::Bool)
                            .expect("Bool var")
                    })
                    .collect();
                var_bits.extend(&bits);
                (RuleKind::BbVar, vec![], bits)
            }
            Node::BvConst(_) => (RuleKind::BbConst, vec![], vec![]),
            Node::BvNot(a) => (RuleKind::BbNot, prem(&[a]), vec![]),
            Node::BvAnd([x, y]) => (RuleKind::BbBitwise(BitOp::And), prem(&[x, y]), vec![]),
            Node::BvOr([x, y]) => (RuleKind::BbBitwise(BitOp::Or), prem(&[x, y]), vec![]),
            Node::BvXor([x, y]) => (RuleKind::BbBitwise(BitOp::Xor), prem(&[x, y]), vec![]),
            Node::BvAdd([x, y]) => {
                let w = store.sort_of(t).bv_width().expect("bit-vector term");
                adds += 1;
                let carries = (0..w)
                    .map(|i| {
                        store
                            .var(&format!("add{adds}.c{i}"), Sort::Bool)
                            .expect("Bool var")
                    })
                    .collect();
                (RuleKind::BbAdd, prem(&[x, y]), carries)
            }
            Node::Eq([x, y]) if store.sort_of(x).bv_width().is_some() => {
                (RuleKind::BbEq, prem(&[x, y]), vec![])
            }
            Node::BvUlt([x, y]) => (RuleKind::BbUlt, prem(&[x, y]), vec![]),
            _ => continue,
        };
        let id = b.must(
            store,
            rule,
            premises,
            Payload::Bv(BvPayload { target: t, aux }),
        );
        if is_bv {
            defined.insert(t, id);
        }
    }
    var_bits
}

fn store_children(store: &TermStore, t: TermId) -> Vec<TermId> {
    store.node(t).children().to_vec()
}

/// Unsatisfiable bit-vector constraints of width 1..=4 over at most three
/// variables: a term disequal to an equivalent rewriting of itself, or random
/// comparisons that happen to conflict.
pub fn bv_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let mut p = new_problem(Logic::QfBv);
        let width = rng.gen_range(1..=4);
        let vars: Vec<TermId> = (0..rng.gen_range(1..=3))
            .map(|i| declare(&mut p, &format!("v{i}"), Sort::BitVec(width)))
            .collect();
        if rng.gen_bool(0.4) {
            let t = random_term(rng, &mut p.store, &vars, width, 2);
            let t2 = rewrite(rng, &mut p.store, t);
            if t == t2 {
                continue;
            }
            let eq = p.store.eq(t, t2).expect("same width");
            let ne = p.store.not(eq).expect("Bool");
            assert(&mut p, ne);
        }
        for _ in 0..rng.gen_range(1..=3) {
            let a = random_atom(rng, &mut p.store, &vars, width);
            let t = if rng.gen_bool(0.4) {
                p.store.not(a).expect("Bool")
            } else {
                a
            };
            assert(&mut p, t);
        }
        if let Some(inst) = certify(p, bitblast) {
            return inst;
        }
    }
}
