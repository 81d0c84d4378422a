use certkernel_core::{Clause, FunId, Lit, Node, Sort, TermId, TermStore};
use certkernel_frontend::sexpr::Pos;
use certkernel_frontend::{Logic, Problem, Symbol, PRED_SORT, PRED_TRUE};
use certkernel_kernel::{EqRule, EqStep, EufPayload, Payload, RuleKind};
use rand::Rng;

use super::{assert, certify, declare, new_problem, Instance};

struct Sig {
    f: FunId,
    g: FunId,
    p: FunId,
    ptrue: TermId,
}

fn fun(p: &mut Problem, name: &str, args: Vec<Sort>, ret: Sort) -> FunId {
    match p.declare(name, args, ret, Pos::default()) {
        Ok(Symbol::Fun(f)) => f,
        other => panic!("declaring {name}: {other:?}"),
    }
}

fn app(store: &mut TermStore, f: FunId, args: Vec<TermId>) -> TermId {
    store
        .intern(Node::Apply(f, args))
        .expect("well-sorted application")
}

/// Equality atom with `@true`, if present, on the right so it prints as a
/// predicate application.
fn eq_atom(store: &mut TermStore, sig: &Sig, l: TermId, r: TermId) -> (TermId, TermId, TermId) {
    let (l, r) = if l == sig.ptrue { (r, l) } else { (l, r) };
    (store.eq(l, r).expect("same sort"), l, r)
}

/// Random justification DAG; returns the lemma and the justification.
fn random_lemma<R: Rng>(
    rng: &mut R,
    store: &mut TermStore,
    sig: &Sig,
    consts: &[TermId],
) -> Option<EufPayload> {
    let u = store.sort_of(consts[0]).clone();
    let pick = |rng: &mut R| consts[rng.gen_range(0..consts.len())];
    let mut pool: Vec<TermId> = consts.to_vec();
    for _ in 0..rng.gen_range(0..3) {
        let x = pick(rng);
        pool.push(app(store, sig.f, vec![x]));
    }
    let mut hyps: Vec<Lit> = Vec::new();
    let mut just: Vec<EqStep> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let (l, r) = if rng.gen_bool(0.2) {
            let x = pool[rng.gen_range(0..pool.len())];
            (app(store, sig.p, vec![x]), sig.ptrue)
        } else {
            (
                pool[rng.gen_range(0..pool.len())],
                pool[rng.gen_range(0..pool.len())],
            )
        };
        if l == r {
            continue;
        }
        let (atom, l, r) = eq_atom(store, sig, l, r);
        if hyps.iter().any(|h| h.atom() == atom) {
            continue;
        }
        hyps.push(Lit::neg(atom));
        just.push(EqStep {
            lhs: l,
            rhs: r,
            rule: EqRule::Hyp(hyps.len() - 1),
        });
    }
    if just.is_empty() {
        return None;
    }
    for _ in 0..rng.gen_range(1..=8) {
        let n = just.len();
        let j = rng.gen_range(0..n);
        let (l, r) = (just[j].lhs, just[j].rhs);
        let step = match rng.gen_range(0..5) {
            0 => EqStep {
                lhs: r,
                rhs: l,
                rule: EqRule::Sym(j),
            },
            1 => {
                let Some(k) = (0..n).find(|&k| just[k].lhs == r && just[k].rhs != l) else {
                    continue;
                };
                EqStep {
                    lhs: l,
                    rhs: just[k].rhs,
                    rule: EqRule::Trans(j, k),
                }
            }
            2 | 3 if store.sort_of(l) == &u => {
                if rng.gen_bool(0.5) {
                    let f = if rng.gen_bool(0.7) { sig.f } else { sig.p };
                    let (fl, fr) = (app(store, f, vec![l]), app(store, f, vec![r]));
                    EqStep {
                        lhs: fl,
                        rhs: fr,
                        rule: EqRule::Cong(f, vec![j]),
                    }
                } else {
                    let c = pick(rng);
                    just.push(EqStep {
                        lhs: c,
                        rhs: c,
                        rule: EqRule::Refl,
                    });
                    let (gl, gr) = (app(store, sig.g, vec![l, c]), app(store, sig.g, vec![r, c]));
                    EqStep {
                        lhs: gl,
                        rhs: gr,
                        rule: EqRule::Cong(sig.g, vec![j, n]),
                    }
                }
            }
            _ => continue,
        };
        just.push(step);
    }
    // Conclude with the last non-trivial step whose atom is not a hypothesis.
    let k = (0..just.len()).rev().find(|&k| {
        let (l, r) = (just[k].lhs, just[k].rhs);
        let atom = store.find(&Node::Eq([l, r]));
        l != r
            && !matches!(just[k].rule, EqRule::Hyp(_))
            && !atom.is_some_and(|a| hyps.iter().any(|h| h.atom() == a))
    })?;
    just.truncate(k + 1);
    let (l, r) = (just[k].lhs, just[k].rhs);
    let (concl, _, _) = eq_atom(store, sig, l, r);
    if hyps.iter().any(|h| h.atom() == concl) {
        return None;
    }
    let mut lemma = hyps;
    lemma.push(Lit::pos(concl));
    Some(EufPayload {
        lemma,
        justification: just,
    })
}

/// Hypotheses of a random congruence lemma plus the negated conclusion, with
/// some unrelated disjunctions over the same atoms.
pub fn euf_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let mut p = new_problem(Logic::QfUf);
        p.declare_sort("U", Pos::default()).expect("fresh problem");
        let u = Sort::Uninterpreted("U".into());
        let consts: Vec<TermId> = (0..rng.gen_range(2..=4))
            .map(|i| declare(&mut p, &format!("c{i}"), u.clone()))
            .collect();
        let f = fun(&mut p, "f", vec![u.clone()], u.clone());
        let g = fun(&mut p, "g", vec![u.clone(), u.clone()], u.clone());
        let pf = fun(&mut p, "P", vec![u.clone()], Sort::Bool);
        let ptrue = p
            .store
            .var(PRED_TRUE, Sort::Uninterpreted(PRED_SORT.into()))
            .expect("variable");
        let sig = Sig { f, g, p: pf, ptrue };
        let Some(payload) = random_lemma(rng, &mut p.store, &sig, &consts) else {
            continue;
        };
        let atoms: Vec<TermId> = payload.lemma.iter().map(|l| l.atom()).collect();
        for lit in &payload.lemma {
            let t = if lit.is_positive() {
                p.store.not(lit.atom()).expect("Bool atom")
            } else {
                lit.atom()
            };
            assert(&mut p, t);
        }
        for _ in 0..rng.gen_range(0..=2) {
            let mut pick = || {
                let a = atoms[rng.gen_range(0..atoms.len())];
                if rng.gen_bool(0.5) {
                    p.store.not(a).expect("Bool atom")
                } else {
                    a
                }
            };
            let (x, y) = (pick(), pick());
            let t = p.store.or(vec![x, y]).expect("Bool");
            assert(&mut p, t);
        }
        debug_assert!(!Clause::from_lits(payload.lemma.iter().copied()).is_trivially_true());
        let lemma = payload.clone();
        if let Some(inst) = certify(p, move |p, b| {
            b.must(&mut p.store, RuleKind::Euf, vec![], Payload::Euf(lemma));
            atoms
        }) {
            return inst;
        }
    }
}
