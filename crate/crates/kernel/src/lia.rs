//! Farkas-style certificates for linear integer arithmetic lemmas.
//!
//! The negation of every lemma literal is a hypothesis row. A certificate
//! combines rows with coefficients (non-negative for inequalities, any sign
//! for equalities) into a ground contradiction such as `0 >= 1`. One optional
//! cut row may be formed first: a combination whose coefficients are divided
//! by their gcd, rounding the bound up, which is sound over the integers.

use std::collections::BTreeMap;
use std::fmt;

use certkernel_core::{Clause, Lit, Node, Sort, TermId, TermStore};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{reject, Rejection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Eq,
}

/// `sum(coeffs[x] * x) rel bound`, with zero coefficients omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinAtom {
    pub coeffs: BTreeMap<TermId, BigInt>,
    pub rel: Rel,
    pub bound: BigInt,
}

impl fmt::Display for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (x, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{x}")?;
        }
        let rel = match self.rel {
            Rel::Ge => ">=",
            Rel::Eq => "=",
        };
        write!(f, " {rel} {}", self.bound)
    }
}

/// Reference to a row of the final combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRef {
    /// Negation of the lemma literal at this index (as written).
    Hyp(usize),
    /// The tightened cut row.
    Cut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiaPayload {
    pub lemma: Vec<Lit>,
    /// Combination of hypothesis rows to tighten into the cut row.
    pub cut: Option<Vec<(usize, BigInt)>>,
    pub combination: Vec<(RowRef, BigInt)>,
}

impl LiaPayload {
    pub fn lemma_clause(&self) -> Clause {
        Clause::from_lits(self.lemma.iter().copied())
    }
}

/// Linear form `sum(coeffs) + constant`.
type Linear = (BTreeMap<TermId, BigInt>, BigInt);

fn linearize(store: &TermStore, t: TermId) -> Result<Linear, Rejection> {
    if store.sort_of(t) != &Sort::Int {
        return reject(format!("{t} is not an Int term"));
    }
    let lin = match store.node(t) {
        Node::IntConst(v) => (BTreeMap::new(), v.clone()),
        Node::Add(args) => {
            let mut acc: Linear = (BTreeMap::new(), BigInt::zero());
            for &a in args {
                add_scaled(&mut acc, &linearize(store, a)?, &BigInt::one());
            }
            acc
        }
        &Node::Sub([a, b]) => {
            let mut acc = linearize(store, a)?;
            add_scaled(&mut acc, &linearize(store, b)?, &-BigInt::one());
            acc
        }
        &Node::Neg(a) => {
            let mut acc = (BTreeMap::new(), BigInt::zero());
            add_scaled(&mut acc, &linearize(store, a)?, &-BigInt::one());
            acc
        }
        &Node::Mul([a, b]) => {
            let (la, lb) = (linearize(store, a)?, linearize(store, b)?);
            let (k, other) = if la.0.is_empty() {
                (la.1, lb)
            } else if lb.0.is_empty() {
                (lb.1, la)
            } else {
                return reject(format!("nonlinear product {t}"));
            };
            let mut acc = (BTreeMap::new(), BigInt::zero());
            add_scaled(&mut acc, &other, &k);
            acc
        }
        // variables, applications and anything else of sort Int are atoms
        _ => (BTreeMap::from([(t, BigInt::one())]), BigInt::zero()),
    };
    Ok(lin)
}

fn add_scaled(acc: &mut Linear, other: &Linear, k: &BigInt) {
    for (x, c) in &other.0 {
        let entry = acc.0.entry(*x).or_insert_with(BigInt::zero);
        *entry += c * k;
        if entry.is_zero() {
            acc.0.remove(x);
        }
    }
    acc.1 += &other.1 * k;
}

/// `lhs - rhs` as a linear form.
fn difference(store: &TermStore, lhs: TermId, rhs: TermId) -> Result<Linear, Rejection> {
    let mut acc = linearize(store, lhs)?;
    add_scaled(&mut acc, &linearize(store, rhs)?, &-BigInt::one());
    Ok(acc)
}

/// `(d ≥ 0)` shifted by `extra`: `d + extra ≥ 0` → `sum ≥ -(c + extra)`.
fn ge_zero(d: Linear, extra: i32) -> LinAtom {
    LinAtom {
        coeffs: d.0,
        rel: Rel::Ge,
        bound: -(d.1 + BigInt::from(extra)),
    }
}

/// Canonical row for what `lit` asserts, using `a > b ⇔ a ≥ b + 1`.
pub fn normalize_lia_literal(store: &TermStore, lit: Lit) -> Result<LinAtom, Rejection> {
    let atom = lit.atom();
    if !store.is_valid(atom) {
        return reject(format!("{atom} is not in the term store"));
    }
    let pos = lit.is_positive();
    match *store.node(atom) {
        // a <= b   ⇔ b - a ≥ 0       ¬(a <= b) ⇔ a - b ≥ 1
        Node::Le([a, b]) if pos => Ok(ge_zero(difference(store, b, a)?, 0)),
        Node::Le([a, b]) => Ok(ge_zero(difference(store, a, b)?, -1)),
        // a < b    ⇔ b - a ≥ 1       ¬(a < b)  ⇔ a - b ≥ 0
        Node::Lt([a, b]) if pos => Ok(ge_zero(difference(store, b, a)?, -1)),
        Node::Lt([a, b]) => Ok(ge_zero(difference(store, a, b)?, 0)),
        Node::Eq([a, b]) if store.sort_of(a) == &Sort::Int => {
            if !pos {
                return reject("disequality needs a case split before an lia step");
            }
            let (coeffs, c) = difference(store, a, b)?;
            Ok(LinAtom {
                coeffs,
                rel: Rel::Eq,
                bound: -c,
            })
        }
        _ => reject(format!("{lit} is not a linear integer comparison")),
    }
}

/// Weighted sum of rows. Inequalities must get non-negative weights.
pub fn combine<'a>(
    rows: impl IntoIterator<Item = (&'a LinAtom, &'a BigInt)>,
) -> Result<LinAtom, Rejection> {
    let mut acc = LinAtom {
        coeffs: BTreeMap::new(),
        rel: Rel::Eq,
        bound: BigInt::zero(),
    };
    let mut used = false;
    for (row, k) in rows {
        if k.is_zero() {
            continue;
        }
        if row.rel == Rel::Ge {
            if k.is_negative() {
                return reject(format!("negative coefficient {k} on inequality {row}"));
            }
            acc.rel = Rel::Ge;
        }
        used = true;
        for (x, c) in &row.coeffs {
            let entry = acc.coeffs.entry(*x).or_insert_with(BigInt::zero);
            *entry += c * k;
            if entry.is_zero() {
                acc.coeffs.remove(x);
            }
        }
        acc.bound += &row.bound * k;
    }
    if !used {
        return reject("empty combination");
    }
    Ok(acc)
}

/// Divides by the gcd of the coefficients and rounds the bound up; the
/// result is always an inequality.
pub fn tighten(row: &LinAtom) -> LinAtom {
    let g = row.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return LinAtom {
            rel: Rel::Ge,
            ..row.clone()
        };
    }
    LinAtom {
        coeffs: row.coeffs.iter().map(|(x, c)| (*x, c / &g)).collect(),
        rel: Rel::Ge,
        bound: row.bound.div_ceil(&g),
    }
}

/// `0 >= k` with `k >= 1`, or `0 = k` with `k != 0`.
pub fn is_contradiction(row: &LinAtom) -> bool {
    row.coeffs.is_empty()
        && match row.rel {
            Rel::Ge => row.bound.is_positive(),
            Rel::Eq => !row.bound.is_zero(),
        }
}

/// Returns the lemma when the certificate refutes its negation, else `[pos true]`.
pub fn check_lia(store: &TermStore, payload: &LiaPayload) -> Clause {
    try_check_lia(store, payload).unwrap_or_else(|_| Clause::trivially_true())
}

pub fn try_check_lia(store: &TermStore, payload: &LiaPayload) -> Result<Clause, Rejection> {
    let mut rows: BTreeMap<usize, LinAtom> = BTreeMap::new();
    let mut hyp = |i: usize| -> Result<(), Rejection> {
        if rows.contains_key(&i) {
            return Ok(());
        }
        let Some(&lit) = payload.lemma.get(i) else {
            return reject(format!("hypothesis {i} out of range"));
        };
        rows.insert(i, normalize_lia_literal(store, lit.negate())?);
        Ok(())
    };
    for (i, _) in payload.cut.iter().flatten() {
        hyp(*i)?;
    }
    for (r, _) in &payload.combination {
        if let RowRef::Hyp(i) = r {
            hyp(*i)?;
        }
    }

    let cut = match &payload.cut {
        Some(parts) => Some(tighten(&combine(parts.iter().map(|(i, k)| (&rows[i], k)))?)),
        None => None,
    };
    let mut parts = Vec::with_capacity(payload.combination.len());
    for (r, k) in &payload.combination {
        let row = match r {
            RowRef::Hyp(i) => &rows[i],
            RowRef::Cut => match &cut {
                Some(c) => c,
                None => return reject("combination uses a cut that was not given"),
            },
        };
        parts.push((row, k));
    }
    let total = combine(parts)?;
    if is_contradiction(&total) {
        Ok(payload.lemma_clause())
    } else {
        reject(format!("combination yields {total}, not a contradiction"))
    }
}
