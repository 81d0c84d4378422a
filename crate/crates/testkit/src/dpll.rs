//! A small CDCL-style search that emits its refutation as `res` steps.
//!
//! Every learned clause consists of negated decisions only and is derived by
//! one resolution chain: the conflict clause resolved against the reasons of
//! the propagated literals, most recent first. All literals of the running
//! resolvent are false and every reason is false except for its propagated
//! literal, so each link of the chain has exactly one clashing atom.

use std::collections::{HashMap, HashSet};

use certkernel_core::{Clause, TermId, TermStore};
use certkernel_kernel::{ClauseId, Payload, RuleKind};

use crate::builder::ProofBuilder;

/// A satisfying assignment of the atoms of the clause set.
pub type Assignment = HashMap<TermId, bool>;

const UNASSIGNED: i8 = -1;

struct Solver {
    atoms: Vec<TermId>,
    /// Literal codes `2 * var + negated`.
    clauses: Vec<(ClauseId, Vec<u32>)>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<u32>,
    /// Trail length at the start of each decision level.
    limits: Vec<usize>,
    head: usize,
    order: Vec<u32>,
}

fn var(l: u32) -> usize {
    (l >> 1) as usize
}

impl Solver {
    fn lit_value(&self, l: u32) -> i8 {
        match self.value[var(l)] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (l & 1) as i8,
        }
    }

    fn current_level(&self) -> u32 {
        self.limits.len() as u32
    }

    fn assign(&mut self, l: u32, reason: Option<usize>) {
        let v = var(l);
        self.value[v] = 1 ^ (l & 1) as i8;
        self.level[v] = self.current_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn backtrack(&mut self, level: u32) {
        if self.current_level() <= level {
            return;
        }
        let keep = self.limits[level as usize];
        for &l in &self.trail[keep..] {
            self.value[var(l)] = UNASSIGNED;
            self.reason[var(l)] = None;
        }
        self.trail.truncate(keep);
        self.limits.truncate(level as usize);
        self.head = keep;
    }

    /// Adds a clause whose literals are all false or unassigned; returns the
    /// index of a conflicting clause if it is already falsified.
    fn attach(&mut self, id: ClauseId, mut lits: Vec<u32>) -> Option<usize> {
        let ci = self.clauses.len();
        // Watch the best two literals: non-false first, then latest assigned.
        let rank = |s: &Solver, l: u32| match s.lit_value(l) {
            UNASSIGNED => (2, 0),
            1 => (3, 0),
            _ => (1, s.level[var(l)]),
        };
        for k in 0..lits.len().min(2) {
            let best = (k..lits.len())
                .max_by_key(|&j| rank(self, lits[j]))
                .unwrap_or(k);
            lits.swap(k, best);
        }
        match lits.len() {
            0 => {
                self.clauses.push((id, lits));
                return Some(ci);
            }
            1 => {}
            _ => self.watches[lits[1] as usize ^ 1].push(ci),
        }
        self.watches[lits[0] as usize ^ 1].push(ci);
        let first = lits[0];
        let second_false = lits.len() == 1 || self.lit_value(lits[1]) == 0;
        self.clauses.push((id, lits));
        match self.lit_value(first) {
            0 if second_false => Some(ci),
            UNASSIGNED if second_false => {
                self.assign(first, Some(ci));
                None
            }
            _ => None,
        }
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let l = self.trail[self.head];
            self.head += 1;
            // Clauses watching the literal that just became false.
            let mut ws = std::mem::take(&mut self.watches[l as usize]);
            let false_lit = l ^ 1;
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let lits = &mut self.clauses[ci].1;
                if lits.len() == 1 {
                    conflict = Some(ci);
                    break;
                }
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let other = lits[0];
                if self.value[var(other)] != UNASSIGNED
                    && self.value[var(other)] ^ (other & 1) as i8 == 1
                {
                    i += 1;
                    continue;
                }
                let lits = &self.clauses[ci].1;
                let replacement = (2..lits.len()).find(|&k| {
                    let x = lits[k];
                    self.value[var(x)] == UNASSIGNED || self.value[var(x)] ^ (x & 1) as i8 == 1
                });
                if let Some(k) = replacement {
                    let lits = &mut self.clauses[ci].1;
                    lits.swap(1, k);
                    let w = lits[1] as usize ^ 1;
                    self.watches[w].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                if self.lit_value(other) == 0 {
                    conflict = Some(ci);
                    break;
                }
                self.assign(other, Some(ci));
                i += 1;
            }
            let rest = std::mem::take(&mut self.watches[l as usize]);
            ws.extend(rest);
            self.watches[l as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Resolves the conflict back to negated decisions; returns the learned
    /// literals and the id of the step deriving them.
    fn analyze(
        &self,
        store: &mut TermStore,
        b: &mut ProofBuilder,
        conflict: usize,
    ) -> (Vec<u32>, ClauseId) {
        let (cid, lits) = &self.clauses[conflict];
        let mut acc: HashSet<u32> = lits.iter().copied().collect();
        let mut chain = vec![*cid];
        for &l in self.trail.iter().rev() {
            let Some(r) = self.reason[var(l)] else {
                continue;
            };
            if !acc.remove(&(l ^ 1)) {
                continue;
            }
            let (rid, rlits) = &self.clauses[r];
            acc.extend(rlits.iter().copied().filter(|&x| x != l));
            chain.push(*rid);
        }
        let id = if chain.len() == 1 {
            chain[0]
        } else {
            b.must(store, RuleKind::Res, chain, Payload::None)
        };
        let mut learned: Vec<u32> = acc.into_iter().collect();
        learned.sort_unstable();
        debug_assert_eq!(b.clause(id).len(), learned.len());
        (learned, id)
    }

    fn pick(&mut self) -> Option<u32> {
        while let Some(&v) = self.order.last() {
            if self.value[v as usize] == UNASSIGNED {
                return Some(v);
            }
            self.order.pop();
        }
        None
    }
}

/// Searches for a refutation of every clause stored in `b` so far and
/// appends it as resolution steps. Returns the id of the empty clause, or a
/// satisfying assignment of the atoms. Atoms in `priority` are decided first.
pub fn refute(
    store: &mut TermStore,
    b: &mut ProofBuilder,
    priority: &[TermId],
) -> Result<ClauseId, Assignment> {
    if let Some((id, _)) = b.clauses().find(|(_, c)| c.is_empty()) {
        return Ok(id);
    }
    let mut index: HashMap<TermId, usize> = HashMap::new();
    let mut atoms = Vec::new();
    let mut input: Vec<(ClauseId, Vec<u32>)> = Vec::new();
    let mut seen: HashSet<Clause> = HashSet::new();
    for (id, c) in b.clauses() {
        let tautology = c.lits().iter().any(|l| c.contains(l.negate()));
        if tautology || !seen.insert(c.clone()) {
            continue;
        }
        let lits = c
            .lits()
            .iter()
            .map(|l| {
                let v = *index.entry(l.atom()).or_insert_with(|| {
                    atoms.push(l.atom());
                    atoms.len() - 1
                });
                2 * v as u32 + u32::from(!l.is_positive())
            })
            .collect();
        input.push((id, lits));
    }
    let n = atoms.len();
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut queued = vec![false; n];
    for t in priority.iter().chain(atoms.iter()) {
        if let Some(&v) = index.get(t) {
            if !std::mem::replace(&mut queued[v], true) {
                order.push(v as u32);
            }
        }
    }
    order.reverse();
    let mut s = Solver {
        atoms,
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![UNASSIGNED; n],
        level: vec![0; n],
        reason: vec![None; n],
        trail: Vec::new(),
        limits: Vec::new(),
        head: 0,
        order,
    };
    let mut pending = None;
    for (id, lits) in input {
        if let Some(c) = s.attach(id, lits) {
            pending = Some(c);
            break;
        }
    }
    loop {
        let conflict = pending.take().or_else(|| s.propagate());
        if let Some(conf) = conflict {
            let (learned, id) = s.analyze(store, b, conf);
            if learned.is_empty() {
                return Ok(id);
            }
            let top = learned.iter().map(|&l| s.level[var(l)]).max().unwrap_or(0);
            s.backtrack(top - 1);
            reorder(&mut s, priority, &index);
            pending = s.attach(id, learned);
            continue;
        }
        let Some(v) = s.pick() else {
            return Err(s
                .atoms
                .iter()
                .enumerate()
                .map(|(i, &t)| (t, s.value[i] == 1))
                .collect());
        };
        s.limits.push(s.trail.len());
        s.assign(2 * v + 1, None);
    }
}

/// Restores the decision order after a backjump.
fn reorder(s: &mut Solver, priority: &[TermId], index: &HashMap<TermId, usize>) {
    let n = s.atoms.len();
    let mut queued = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for t in priority.iter().chain(s.atoms.iter()) {
        let Some(&v) = index.get(t) else { continue };
        if !std::mem::replace(&mut queued[v], true) && s.value[v] == UNASSIGNED {
            order.push(v as u32);
        }
    }
    order.reverse();
    s.order = order;
}

#[cfg(test)]
mod tests {
    use super::*;
    use certkernel_core::{Lit, Sort};
    use certkernel_kernel::check;

    fn lits(vars: &[TermId], xs: &[i32]) -> Clause {
        Clause::from_lits(
            xs.iter()
                .map(|&x| Lit::new(vars[x.unsigned_abs() as usize - 1], x > 0)),
        )
    }

    #[allow(clippy::needless_range_loop)]
    fn pigeonhole(s: &mut TermStore, holes: usize) -> Vec<Clause> {
        let pigeons = holes + 1;
        let p: Vec<Vec<TermId>> = (0..pigeons)
            .map(|i| {
                (0..holes)
                    .map(|j| s.var(&format!("p{i}_{j}"), Sort::Bool).unwrap())
                    .collect()
            })
            .collect();
        let mut cs: Vec<Clause> = p
            .iter()
            .map(|row| Clause::from_lits(row.iter().map(|&x| Lit::pos(x))))
            .collect();
        for j in 0..holes {
            for a in 0..pigeons {
                for b in a + 1..pigeons {
                    cs.push(Clause::from_lits([Lit::neg(p[a][j]), Lit::neg(p[b][j])]));
                }
            }
        }
        cs
    }

    #[test]
    fn refutes_pigeonhole() {
        for holes in 1..5 {
            let mut s = TermStore::new();
            let inputs = pigeonhole(&mut s, holes);
            let mut b = ProofBuilder::new(&s, &inputs);
            let id = refute(&mut s, &mut b, &[]).expect("pigeonhole is unsat");
            assert!(b.clause(id).is_empty());
            let cert = b.finish();
            assert!(check(&mut s, &inputs, &cert).verdict.is_valid());
        }
    }

    #[test]
    fn finds_models() {
        let mut s = TermStore::new();
        let v: Vec<TermId> = (0..3)
            .map(|i| s.var(&format!("x{i}"), Sort::Bool).unwrap())
            .collect();
        let inputs = vec![lits(&v, &[1, 2]), lits(&v, &[-1, 3]), lits(&v, &[-2, -3])];
        let mut b = ProofBuilder::new(&s, &inputs);
        let model = refute(&mut s, &mut b, &[]).unwrap_err();
        for c in &inputs {
            assert!(c.lits().iter().any(|l| model[&l.atom()] == l.is_positive()));
        }
    }

    #[test]
    fn unit_conflicts_and_empty_inputs() {
        let mut s = TermStore::new();
        let v: Vec<TermId> = (0..1)
            .map(|i| s.var(&format!("x{i}"), Sort::Bool).unwrap())
            .collect();
        let inputs = vec![lits(&v, &[1]), lits(&v, &[-1])];
        let mut b = ProofBuilder::new(&s, &inputs);
        let id = refute(&mut s, &mut b, &[]).unwrap();
        assert!(check(&mut s, &inputs, &b.finish()).verdict.is_valid());
        assert!(id.0 >= 2);
        let inputs = vec![Clause::empty()];
        let mut b = ProofBuilder::new(&s, &inputs);
        assert_eq!(refute(&mut s, &mut b, &[]), Ok(ClauseId(0)));
    }
}
