use std::collections::{BTreeMap, HashMap};

use certkernel_core::{Clause, FunId, Lit, Node, Sort, TermId, TermStore};

use thiserror::Error;

use crate::eval::{apply_op, default_value, EvalError, FunTable, Model, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_assignments: u64,
    /// Integer leaves range over `[-int_box, int_box]`.
    pub int_box: i128,
    /// Size of every uninterpreted sort.
    pub max_domain: u32,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_assignments: 1 << 24,
            int_box: 10,
            max_domain: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Unsat,
    Sat(Model),
    /// The search space exceeded the budget, or a value left the machine
    /// range; no verdict.
    Exhausted,
}

impl Outcome {
    pub fn is_unsat(&self) -> bool {
        matches!(self, Outcome::Unsat)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResourceError {
    #[error("search space of {0} assignments exceeds the budget of {1}")]
    TooLarge(u128, u64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

enum Op {
    Slot(usize),
    Node(Vec<usize>),
}

struct Compiled<'s> {
    store: &'s TermStore,
    terms: Vec<TermId>,
    ops: Vec<Op>,
    /// Candidate values per free slot.
    domains: Vec<Vec<Value>>,
    slot_pos: Vec<usize>,
    /// Application positions grouped by symbol, as `(result, args)`.
    apps: BTreeMap<FunId, Vec<(usize, Vec<usize>)>>,
    clauses: Vec<Vec<(usize, bool)>>,
    total: u64,
}

impl<'s> Compiled<'s> {
    fn new(
        store: &'s TermStore,
        clauses: &[Clause],
        budget: Budget,
    ) -> Result<Self, ResourceError> {
        let mut seen = vec![false; store.len()];
        let mut stack: Vec<TermId> = clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.atom()))
            .collect();
        while let Some(t) = stack.pop() {
            if !std::mem::replace(&mut seen[t.index()], true) {
                stack.extend(store.node(t).children());
            }
        }
        let terms: Vec<TermId> = (0..store.len())
            .filter(|&i| seen[i])
            .map(TermId::from_index)
            .collect();
        let pos: HashMap<TermId, usize> = terms.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        // unit clauses on Boolean leaves pin their value
        let mut pinned: HashMap<TermId, Vec<Value>> = HashMap::new();
        for c in clauses {
            if let [l] = c.lits() {
                let t = l.atom();
                if matches!(store.node(t), Node::Var(..) | Node::Apply(..)) {
                    let dom = pinned
                        .entry(t)
                        .or_insert_with(|| vec![Value::Bool(false), Value::Bool(true)]);
                    dom.retain(|v| *v == Value::Bool(l.is_positive()));
                }
            }
        }

        let mut ops = Vec::with_capacity(terms.len());
        let mut domains = Vec::new();
        let mut slot_pos = Vec::new();
        let mut apps: BTreeMap<FunId, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
        let mut total: u128 = 1;
        for (i, &t) in terms.iter().enumerate() {
            let node = store.node(t);
            let kids: Vec<usize> = node.children().iter().map(|c| pos[c]).collect();
            match node {
                Node::Var(..) | Node::Apply(..) => {
                    let dom = match pinned.remove(&t) {
                        Some(d) => d,
                        None => domain(store.sort_of(t), budget)?,
                    };
                    total = total.saturating_mul(dom.len() as u128);
                    if total > budget.max_assignments as u128 {
                        return Err(ResourceError::TooLarge(total, budget.max_assignments));
                    }
                    if let Node::Apply(f, _) = node {
                        apps.entry(*f).or_default().push((i, kids));
                    }
                    ops.push(Op::Slot(domains.len()));
                    domains.push(dom);
                    slot_pos.push(i);
                }
                _ => ops.push(Op::Node(kids)),
            }
        }
        let clauses = clauses
            .iter()
            .map(|c| {
                c.lits()
                    .iter()
                    .map(|l: &Lit| (pos[&l.atom()], l.is_positive()))
                    .collect()
            })
            .collect();
        Ok(Compiled {
            store,
            terms,
            ops,
            domains,
            slot_pos,
            apps,
            clauses,
            total: total as u64,
        })
    }

    /// Evaluates assignment `index` into `vals`. `Ok(true)` means it is a
    /// functionally consistent model of every clause.
    fn satisfies(
        &self,
        index: u64,
        vals: &mut Vec<Value>,
        scratch: &mut Vec<Value>,
    ) -> Result<bool, EvalError> {
        debug_assert!(index < self.total);
        vals.clear();
        let mut rest = index;
        let mut slot_vals = Vec::with_capacity(self.domains.len());
        for dom in &self.domains {
            let n = dom.len() as u64;
            slot_vals.push(dom[(rest % n) as usize]);
            rest /= n;
        }
        for (i, op) in self.ops.iter().enumerate() {
            let v = match op {
                Op::Slot(s) => slot_vals[*s],
                Op::Node(kids) => {
                    scratch.clear();
                    scratch.extend(kids.iter().map(|&k| vals[k]));
                    apply_op(self.terms[i], self.store.node(self.terms[i]), scratch)?
                }
            };
            vals.push(v);
        }
        for group in self.apps.values() {
            for (j, (rj, aj)) in group.iter().enumerate() {
                for (rk, ak) in &group[..j] {
                    let same_args = aj.iter().zip(ak).all(|(&x, &y)| vals[x] == vals[y]);
                    if same_args && vals[*rj] != vals[*rk] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(self.clauses.iter().all(|c| {
            c.iter()
                .any(|&(p, positive)| vals[p] == Value::Bool(positive))
        }))
    }

    fn model_at(&self, index: u64) -> Result<Model, EvalError> {
        let mut vals = Vec::new();
        self.satisfies(index, &mut vals, &mut Vec::new())?;
        let mut model = Model::default();
        for &p in &self.slot_pos {
            let t = self.terms[p];
            if let Node::Var(..) = self.store.node(t) {
                model.vars.insert(t, vals[p]);
            }
        }
        for (f, group) in &self.apps {
            let default = default_value(&self.store.fun(*f).ret_sort);
            let points = group
                .iter()
                .map(|(r, args)| (args.iter().map(|&a| vals[a]).collect(), vals[*r]))
                .collect();
            model.funs.insert(*f, FunTable { points, default });
        }
        Ok(model)
    }

    fn search_range(&self, range: std::ops::Range<u64>) -> Result<Option<u64>, EvalError> {
        let (mut vals, mut scratch) = (Vec::new(), Vec::new());
        for i in range {
            if self.satisfies(i, &mut vals, &mut scratch)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn domain(sort: &Sort, budget: Budget) -> Result<Vec<Value>, ResourceError> {
    Ok(match sort {
        Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
        Sort::Int => (-budget.int_box..=budget.int_box).map(Value::Int).collect(),
        Sort::BitVec(w) => {
            if *w >= 32 || (1u64 << w) > budget.max_assignments {
                return Err(ResourceError::TooLarge(
                    1u128 << (*w).min(127),
                    budget.max_assignments,
                ));
            }
            (0..1u128 << w).map(|v| Value::Bv(v, *w)).collect()
        }
        Sort::Uninterpreted(_) => (0..budget.max_domain.max(1)).map(Value::Elem).collect(),
    })
}

const CHUNK: u64 = 4096;

fn first_hit(c: &Compiled<'_>, parallel: bool) -> Result<Option<u64>, EvalError> {
    let chunks = c.total.div_ceil(CHUNK);
    let range = |k: u64| k * CHUNK..((k + 1) * CHUNK).min(c.total);
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..chunks)
            .into_par_iter()
            .map(|k| c.search_range(range(k)))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None));
    }
    let _ = parallel;
    for k in 0..chunks {
        if let Some(i) = c.search_range(range(k))? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn solve(
    store: &TermStore,
    clauses: &[Clause],
    budget: Budget,
    parallel: bool,
) -> Result<Outcome, ResourceError> {
    let c = Compiled::new(store, clauses, budget)?;
    match first_hit(&c, parallel)? {
        Some(i) => Ok(Outcome::Sat(c.model_at(i)?)),
        None => Ok(Outcome::Unsat),
    }
}

fn settle(r: Result<Outcome, ResourceError>) -> Outcome {
    r.unwrap_or(Outcome::Exhausted)
}

/// Searches every assignment within `budget` for a model of `clauses`.
///
/// The returned model is the first one in enumeration order, so the result
/// does not depend on thread scheduling.
pub fn brute_unsat(store: &TermStore, clauses: &[Clause], budget: Budget) -> Outcome {
    settle(solve(store, clauses, budget, true))
}

pub fn brute_unsat_sequential(store: &TermStore, clauses: &[Clause], budget: Budget) -> Outcome {
    settle(solve(store, clauses, budget, false))
}

fn negated_units(clause: &Clause) -> impl Iterator<Item = Clause> + '_ {
    clause
        .lits()
        .iter()
        .map(|l| Clause::from_lits([l.negate()]))
}

/// Whether `premises` entail `conclusion` within `budget`.
pub fn implied(
    store: &TermStore,
    premises: &[Clause],
    conclusion: &Clause,
    budget: Budget,
) -> Result<bool, ResourceError> {
    let mut all = premises.to_vec();
    all.extend(negated_units(conclusion));
    Ok(solve(store, &all, budget, true)?.is_unsat())
}

/// Whether `clause` holds in every model within `budget`.
pub fn clause_valid(
    store: &TermStore,
    clause: &Clause,
    budget: Budget,
) -> Result<bool, ResourceError> {
    implied(store, &[], clause, budget)
}

/// Whether a ground equality clause holds in every interpretation whose
/// uninterpreted sorts have at most `max_domain` elements.
///
/// A counter-model over fewer elements extends to one over exactly
/// `max_domain`, so only that size is enumerated. Integer leaves range over a
/// small box; this is a refuter, not a decision procedure.
pub fn euf_lemma_valid_oracle(
    store: &TermStore,
    lemma: &Clause,
    max_domain: u32,
    max_assignments: u64,
) -> Result<bool, ResourceError> {
    let budget = Budget {
        max_assignments,
        int_box: 2,
        max_domain,
    };
    clause_valid(store, lemma, budget)
}
