//! Bit-blasting small checkers.
//!
//! Each bit-vector term is related to a list of Boolean formulas, least
//! significant bit first. Variables get fresh Boolean variables as bits;
//! operations get formulas over their operands' bits; `=` and `bvult` atoms
//! are linked to their bit-level meaning by a unit clause `(iff atom φ)` that
//! the clausification and resolution checkers then take apart.
//!
//! Steps that build on other terms list the steps that bit-blasted those
//! terms as premises, so every dependency is visible in the certificate.

use std::collections::{HashMap, HashSet};

use certkernel_core::{Clause, Lit, Node, Sort, TermId, TermStore};

use crate::certificate::{BitOp, ClauseId};
use crate::{reject, Rejection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvPayload {
    pub target: TermId,
    /// Fresh Boolean variables: the bits of a variable, or the carries of
    /// an addition.
    pub aux: Vec<TermId>,
}

#[derive(Debug, Clone)]
struct Entry {
    bits: Vec<TermId>,
    defined_by: ClauseId,
}

/// Bit lists installed so far in one run, plus the freshness registry.
#[derive(Debug, Clone, Default)]
pub struct BitBlastMap {
    entries: HashMap<TermId, Entry>,
    aux_used: HashSet<TermId>,
    /// Variables occurring in any stored clause.
    occurring: HashSet<TermId>,
    walked: Vec<bool>,
}

impl BitBlastMap {
    pub fn new() -> BitBlastMap {
        BitBlastMap::default()
    }

    pub fn bits(&self, t: TermId) -> Option<&[TermId]> {
        self.entries.get(&t).map(|e| e.bits.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records every variable under the atoms of a stored clause so later
    /// steps cannot claim them as fresh.
    pub fn observe_clause(&mut self, store: &TermStore, clause: &Clause) {
        let mut stack: Vec<TermId> = clause.lits().iter().map(|l| l.atom()).collect();
        while let Some(t) = stack.pop() {
            if self.walked.len() <= t.index() {
                self.walked.resize(store.len().max(t.index() + 1), false);
            }
            if std::mem::replace(&mut self.walked[t.index()], true) {
                continue;
            }
            let node = store.node(t);
            if let Node::Var(..) = node {
                self.occurring.insert(t);
            }
            stack.extend_from_slice(node.children());
        }
    }

    fn is_fresh(&self, store: &TermStore, v: TermId) -> bool {
        store.is_valid(v)
            && matches!(store.node(v), Node::Var(_, Sort::Bool))
            && !self.aux_used.contains(&v)
            && !self.occurring.contains(&v)
    }

    fn claim_fresh(
        &mut self,
        store: &TermStore,
        aux: &[TermId],
        width: usize,
    ) -> Result<(), Rejection> {
        if aux.len() != width {
            return reject(format!(
                "expected {width} auxiliary bits, got {}",
                aux.len()
            ));
        }
        let mut seen = HashSet::new();
        for &v in aux {
            if !self.is_fresh(store, v) || !seen.insert(v) {
                return reject(format!("auxiliary variable {v} is not fresh"));
            }
        }
        self.aux_used.extend(aux.iter().copied());
        Ok(())
    }

    fn install(&mut self, target: TermId, bits: Vec<TermId>, step: ClauseId) {
        self.entries.insert(
            target,
            Entry {
                bits,
                defined_by: step,
            },
        );
    }

    /// Bits of `operand`, which must have been installed by `premise`.
    fn operand(
        &self,
        operand: TermId,
        premise: Option<&ClauseId>,
    ) -> Result<Vec<TermId>, Rejection> {
        let Some(entry) = self.entries.get(&operand) else {
            return reject(format!("operand {operand} is not bit-blasted"));
        };
        match premise {
            Some(&p) if p == entry.defined_by => Ok(entry.bits.clone()),
            Some(p) => reject(format!(
                "operand {operand} was bit-blasted by step {}, not premise {p}",
                entry.defined_by
            )),
            None => reject(format!("missing premise for operand {operand}")),
        }
    }

    fn unmapped(&self, store: &TermStore, target: TermId) -> Result<(), Rejection> {
        if !store.is_valid(target) {
            return reject(format!("target {target} is not in the term store"));
        }
        if self.entries.contains_key(&target) {
            return reject(format!("{target} is already bit-blasted"));
        }
        Ok(())
    }

    fn arity(premises: &[ClauseId], n: usize) -> Result<(), Rejection> {
        if premises.len() != n {
            return reject(format!("expected {n} premises, got {}", premises.len()));
        }
        Ok(())
    }

    /// Maps a bit-vector variable to fresh Boolean variables.
    pub fn bb_var(
        &mut self,
        store: &TermStore,
        step: ClauseId,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 0)?;
        let t = payload.target;
        self.unmapped(store, t)?;
        let Node::Var(_, Sort::BitVec(w)) = store.node(t) else {
            return reject(format!("bb_var target {t} is not a bit-vector variable"));
        };
        self.claim_fresh(store, &payload.aux, *w as usize)?;
        self.install(t, payload.aux.clone(), step);
        Ok(Clause::trivially_true())
    }

    pub fn bb_const(
        &mut self,
        store: &TermStore,
        step: ClauseId,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 0)?;
        let t = payload.target;
        self.unmapped(store, t)?;
        let Node::BvConst(v) = store.node(t) else {
            return reject(format!("bb_const target {t} is not a constant"));
        };
        if !payload.aux.is_empty() {
            return reject("bb_const takes no auxiliary variables");
        }
        let bits = v.bits().iter().map(|&b| store.bool_const(b)).collect();
        self.install(t, bits, step);
        Ok(Clause::trivially_true())
    }

    pub fn bb_not(
        &mut self,
        store: &mut TermStore,
        step: ClauseId,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 1)?;
        let t = payload.target;
        self.unmapped(store, t)?;
        let &Node::BvNot(a) = store.node(t) else {
            return reject(format!("bb_not target {t} is not a bvnot"));
        };
        no_aux(payload)?;
        let bits = self
            .operand(a, premises.first())?
            .into_iter()
            .map(|b| store.not(b))
            .collect::<Result<_, _>>()
            .map_err(sort_rejection)?;
        self.install(t, bits, step);
        Ok(Clause::trivially_true())
    }

    pub fn bb_bitwise(
        &mut self,
        store: &mut TermStore,
        op: BitOp,
        step: ClauseId,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 2)?;
        let t = payload.target;
        self.unmapped(store, t)?;
        let [a, b] = match (op, store.node(t)) {
            (BitOp::And, &Node::BvAnd(ab))
            | (BitOp::Or, &Node::BvOr(ab))
            | (BitOp::Xor, &Node::BvXor(ab)) => ab,
            (_, node) => {
                return reject(format!(
                    "bitwise {op:?} does not apply to `{}`",
                    node.kind_name()
                ))
            }
        };
        no_aux(payload)?;
        let (xa, xb) = (
            self.operand(a, premises.first())?,
            self.operand(b, premises.get(1))?,
        );
        let bits = xa
            .into_iter()
            .zip(xb)
            .map(|(x, y)| match op {
                BitOp::And => store.and(vec![x, y]),
                BitOp::Or => store.or(vec![x, y]),
                BitOp::Xor => store.xor(x, y),
            })
            .collect::<Result<_, _>>()
            .map_err(sort_rejection)?;
        self.install(t, bits, step);
        Ok(Clause::trivially_true())
    }

    /// Ripple-carry addition. `aux` are the carries `c0..c(w-1)`; the step
    /// returns the unit clause of their definitions
    /// `(and (iff c0 false) (iff c(i+1) (or (and ai bi) (and (xor ai bi) ci))) ...)`,
    /// without the `and` at width 1.
    pub fn bb_add(
        &mut self,
        store: &mut TermStore,
        step: ClauseId,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 2)?;
        let t = payload.target;
        self.unmapped(store, t)?;
        let &Node::BvAdd([a, b]) = store.node(t) else {
            return reject(format!("bb_add target {t} is not a bvadd"));
        };
        let (xa, xb) = (
            self.operand(a, premises.first())?,
            self.operand(b, premises.get(1))?,
        );
        let carries = payload.aux.clone();
        self.claim_fresh(store, &carries, xa.len())?;
        let build =
            |store: &mut TermStore| -> Result<(Vec<TermId>, TermId), certkernel_core::SortError> {
                let mut bits = Vec::with_capacity(xa.len());
                let mut links = vec![store.iff(carries[0], TermId::FALSE)?];
                for i in 0..xa.len() {
                    let half = store.xor(xa[i], xb[i])?;
                    bits.push(store.xor(half, carries[i])?);
                    if i + 1 < xa.len() {
                        let generate = store.and(vec![xa[i], xb[i]])?;
                        let propagate = store.and(vec![half, carries[i]])?;
                        let carry_out = store.or(vec![generate, propagate])?;
                        links.push(store.iff(carries[i + 1], carry_out)?);
                    }
                }
                Ok((bits, conj(store, links)?))
            };
        let (bits, defs) = build(store).map_err(sort_rejection)?;
        self.install(t, bits, step);
        Ok(Clause::from_lits([Lit::pos(defs)]))
    }

    /// `(iff (= s t) (and (iff s0 t0) ... ))` as a unit clause; the `and` is
    /// omitted at width 1.
    pub fn bb_eq(
        &mut self,
        store: &mut TermStore,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 2)?;
        let atom = payload.target;
        if !store.is_valid(atom) {
            return reject(format!("target {atom} is not in the term store"));
        }
        let &Node::Eq([s, t]) = store.node(atom) else {
            return reject(format!("bb_eq target {atom} is not an equality"));
        };
        no_aux(payload)?;
        let (xs, xt) = (
            self.operand(s, premises.first())?,
            self.operand(t, premises.get(1))?,
        );
        let link = (|| {
            let pairs = xs
                .iter()
                .zip(&xt)
                .map(|(&x, &y)| store.iff(x, y))
                .collect::<Result<Vec<_>, _>>()?;
            let bits = conj(store, pairs)?;
            store.iff(atom, bits)
        })()
        .map_err(sort_rejection)?;
        Ok(Clause::from_lits([Lit::pos(link)]))
    }

    /// `(iff (bvult s t) u)` where `u` compares bits from the most significant
    /// one down: `u0 = ¬s0 ∧ t0`, `ui = (¬si ∧ ti) ∨ ((si ⇔ ti) ∧ u(i-1))`.
    pub fn bb_ult(
        &mut self,
        store: &mut TermStore,
        premises: &[ClauseId],
        payload: &BvPayload,
    ) -> Result<Clause, Rejection> {
        Self::arity(premises, 2)?;
        let atom = payload.target;
        if !store.is_valid(atom) {
            return reject(format!("target {atom} is not in the term store"));
        }
        let &Node::BvUlt([s, t]) = store.node(atom) else {
            return reject(format!("bb_ult target {atom} is not a bvult"));
        };
        no_aux(payload)?;
        let (xs, xt) = (
            self.operand(s, premises.first())?,
            self.operand(t, premises.get(1))?,
        );
        let link = (|| {
            let mut below: Option<TermId> = None;
            for (&si, &ti) in xs.iter().zip(&xt) {
                let not_s = store.not(si)?;
                let lt_here = store.and(vec![not_s, ti])?;
                below = Some(match below {
                    None => lt_here,
                    Some(prev) => {
                        let same = store.iff(si, ti)?;
                        let keep = store.and(vec![same, prev])?;
                        store.or(vec![lt_here, keep])?
                    }
                });
            }
            store.iff(atom, below.expect("bit-vectors have width >= 1"))
        })()
        .map_err(sort_rejection)?;
        Ok(Clause::from_lits([Lit::pos(link)]))
    }
}

/// `(and xs)`, or the single formula itself.
fn conj(store: &mut TermStore, xs: Vec<TermId>) -> Result<TermId, certkernel_core::SortError> {
    match xs.as_slice() {
        [x] => Ok(*x),
        _ => store.and(xs),
    }
}

fn no_aux(payload: &BvPayload) -> Result<(), Rejection> {
    if payload.aux.is_empty() {
        Ok(())
    } else {
        reject("this rule takes no auxiliary variables")
    }
}

fn sort_rejection(e: certkernel_core::SortError) -> Rejection {
    Rejection::new(format!("cannot build bit formula: {e}"))
}
