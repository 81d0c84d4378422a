//! Replay of ground equational justifications for EUF theory lemmas.
//!
//! A lemma is a clause `-(a1 = b1) v ... v -(an = bn) v (s = t)`. Its
//! justification is a list of [`EqStep`]s, each deriving one oriented
//! equality from the hypotheses and earlier steps. The lemma is accepted when
//! the last step derives `s = t` in either orientation.

use certkernel_core::{Clause, FunId, Lit, Node, TermId, TermStore};

use crate::{reject, Rejection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqRule {
    Refl,
    Sym(usize),
    Trans(usize, usize),
    Cong(FunId, Vec<usize>),
    /// Index into the lemma literals as written.
    Hyp(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqStep {
    pub lhs: TermId,
    pub rhs: TermId,
    pub rule: EqRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EufPayload {
    /// Lemma literals in the order they were written; `Hyp` indexes this.
    pub lemma: Vec<Lit>,
    pub justification: Vec<EqStep>,
}

impl EufPayload {
    pub fn lemma_clause(&self) -> Clause {
        Clause::from_lits(self.lemma.iter().copied())
    }
}

/// Returns the lemma when the justification proves it, else `[pos true]`.
pub fn check_euf(store: &TermStore, payload: &EufPayload) -> Clause {
    try_check_euf(store, payload).unwrap_or_else(|_| Clause::trivially_true())
}

pub fn try_check_euf(store: &TermStore, payload: &EufPayload) -> Result<Clause, Rejection> {
    let lemma = payload.lemma_clause();
    let eq_sides = |lit: Lit| -> Option<[TermId; 2]> {
        match store.is_valid(lit.atom()).then(|| store.node(lit.atom())) {
            Some(&Node::Eq(sides)) => Some(sides),
            _ => None,
        }
    };

    let mut conclusion = None;
    for &lit in lemma.lits() {
        let Some(sides) = eq_sides(lit) else {
            return reject(format!("lemma literal {lit} is not an equality"));
        };
        if lit.is_positive() {
            if conclusion.is_some() {
                return reject("lemma has more than one positive equality");
            }
            conclusion = Some(sides);
        }
    }
    let Some([s, t]) = conclusion else {
        return reject("lemma has no positive equality to conclude");
    };

    let mut derived: Vec<(TermId, TermId)> = Vec::with_capacity(payload.justification.len());
    for (k, step) in payload.justification.iter().enumerate() {
        let earlier = |j: usize| -> Result<(TermId, TermId), Rejection> {
            derived
                .get(j)
                .copied()
                .ok_or_else(|| Rejection::new(format!("eq step {k} refers to later step {j}")))
        };
        let (l, r) = (step.lhs, step.rhs);
        let ok = match &step.rule {
            EqRule::Refl => l == r,
            EqRule::Sym(j) => earlier(*j)? == (r, l),
            EqRule::Trans(i, j) => {
                let (a, b) = earlier(*i)?;
                let (b2, c) = earlier(*j)?;
                a == l && b == b2 && c == r
            }
            EqRule::Cong(f, refs) => {
                match (
                    store.is_valid(l).then(|| store.node(l)),
                    store.is_valid(r).then(|| store.node(r)),
                ) {
                    (Some(Node::Apply(fl, us)), Some(Node::Apply(fr, vs))) => {
                        if fl != f || fr != f || us.len() != refs.len() || vs.len() != refs.len() {
                            false
                        } else {
                            let mut all = true;
                            for (i, &j) in refs.iter().enumerate() {
                                all &= earlier(j)? == (us[i], vs[i]);
                            }
                            all
                        }
                    }
                    _ => false,
                }
            }
            EqRule::Hyp(i) => match payload.lemma.get(*i) {
                Some(&lit) if !lit.is_positive() => eq_sides(lit) == Some([l, r]),
                _ => false,
            },
        };
        if !ok {
            return reject(format!(
                "eq step {k} ({:?}) does not derive {l} = {r}",
                step.rule
            ));
        }
        derived.push((l, r));
    }

    match derived.last() {
        Some(&last) if last == (s, t) || last == (t, s) => Ok(lemma),
        Some(&(l, r)) => reject(format!(
            "justification ends with {l} = {r}, not the conclusion"
        )),
        None => reject("empty justification"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use certkernel_core::{FunSym, Sort};

    struct Fx {
        s: TermStore,
        f: FunId,
        a: TermId,
        b: TermId,
        c: TermId,
    }

    fn fixture() -> Fx {
        let mut s = TermStore::new();
        let u = Sort::Uninterpreted("U".into());
        let f = s
            .declare_fun(FunSym {
                name: "f".into(),
                arg_sorts: vec![u.clone()],
                ret_sort: u.clone(),
            })
            .unwrap();
        let a = s.var("a", u.clone()).unwrap();
        let b = s.var("b", u.clone()).unwrap();
        let c = s.var("c", u).unwrap();
        Fx { s, f, a, b, c }
    }

    fn app(s: &mut TermStore, f: FunId, x: TermId) -> TermId {
        s.intern(Node::Apply(f, vec![x])).unwrap()
    }

    #[test]
    fn congruence_instance() {
        let Fx { mut s, f, a, b, .. } = fixture();
        let (fa, fb) = (app(&mut s, f, a), app(&mut s, f, b));
        let ab = s.eq(a, b).unwrap();
        let fab = s.eq(fa, fb).unwrap();
        let payload = EufPayload {
            lemma: vec![Lit::neg(ab), Lit::pos(fab)],
            justification: vec![
                EqStep {
                    lhs: a,
                    rhs: b,
                    rule: EqRule::Hyp(0),
                },
                EqStep {
                    lhs: fa,
                    rhs: fb,
                    rule: EqRule::Cong(f, vec![0]),
                },
            ],
        };
        assert_eq!(check_euf(&s, &payload), payload.lemma_clause());
    }

    #[test]
    fn transitivity_and_orientation() {
        let Fx { mut s, a, b, c, .. } = fixture();
        let ab = s.eq(a, b).unwrap();
        let bc = s.eq(b, c).unwrap();
        let ac = s.eq(a, c).unwrap();
        let ca = s.eq(c, a).unwrap();
        let just = vec![
            EqStep {
                lhs: a,
                rhs: b,
                rule: EqRule::Hyp(0),
            },
            EqStep {
                lhs: b,
                rhs: c,
                rule: EqRule::Hyp(1),
            },
            EqStep {
                lhs: a,
                rhs: c,
                rule: EqRule::Trans(0, 1),
            },
        ];
        let p = EufPayload {
            lemma: vec![Lit::neg(ab), Lit::neg(bc), Lit::pos(ac)],
            justification: just.clone(),
        };
        assert!(!check_euf(&s, &p).is_trivially_true());
        let flipped = EufPayload {
            lemma: vec![Lit::neg(ab), Lit::neg(bc), Lit::pos(ca)],
            justification: just,
        };
        assert!(!check_euf(&s, &flipped).is_trivially_true());
    }

    #[test]
    fn malformed_chains_are_rejected() {
        let Fx { mut s, a, b, c, .. } = fixture();
        let ab = s.eq(a, b).unwrap();
        let bc = s.eq(b, c).unwrap();
        let ac = s.eq(a, c).unwrap();
        let lemma = vec![Lit::neg(ab), Lit::neg(bc), Lit::pos(ac)];
        let bad = [
            // trans with mismatched middle term
            vec![
                EqStep {
                    lhs: a,
                    rhs: b,
                    rule: EqRule::Hyp(0),
                },
                EqStep {
                    lhs: b,
                    rhs: c,
                    rule: EqRule::Hyp(1),
                },
                EqStep {
                    lhs: a,
                    rhs: c,
                    rule: EqRule::Trans(1, 0),
                },
            ],
            // forward reference
            vec![EqStep {
                lhs: a,
                rhs: c,
                rule: EqRule::Sym(0),
            }],
            // hyp pointing at the conclusion
            vec![EqStep {
                lhs: a,
                rhs: c,
                rule: EqRule::Hyp(2),
            }],
            vec![],
        ];
        for justification in bad {
            let p = EufPayload {
                lemma: lemma.clone(),
                justification,
            };
            assert!(check_euf(&s, &p).is_trivially_true());
        }
    }

    #[test]
    fn lemma_shape() {
        let Fx { mut s, a, b, c, .. } = fixture();
        let ab = s.eq(a, b).unwrap();
        let bc = s.eq(b, c).unwrap();
        let refl = |t| EqStep {
            lhs: t,
            rhs: t,
            rule: EqRule::Refl,
        };
        let two_pos = EufPayload {
            lemma: vec![Lit::pos(ab), Lit::pos(bc)],
            justification: vec![refl(a)],
        };
        assert!(check_euf(&s, &two_pos).is_trivially_true());
        let aa = s.eq(a, a).unwrap();
        let reflexive = EufPayload {
            lemma: vec![Lit::pos(aa)],
            justification: vec![refl(a)],
        };
        assert!(!check_euf(&s, &reflexive).is_trivially_true());
    }
}
