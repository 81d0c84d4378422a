use std::fmt;

use crate::term::{SortError, TermId, TermStore};

/// A polarity-signed Boolean atom, encoded as `2 * atom + (0 if positive else 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(atom: TermId, positive: bool) -> Lit {
        let atom = u32::try_from(atom.index()).expect("term id fits in u32");
        Lit(2 * atom + u32::from(!positive))
    }

    pub fn pos(atom: TermId) -> Lit {
        Lit::new(atom, true)
    }

    pub fn neg(atom: TermId) -> Lit {
        Lit::new(atom, false)
    }

    pub fn atom(self) -> TermId {
        TermId::from_index((self.0 >> 1) as usize)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn from_code(code: u32) -> Lit {
        Lit(code)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { "" } else { "-" };
        write!(f, "{sign}{}", self.atom())
    }
}

/// Canonical disjunction: literals strictly sorted by their encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// `[pos true]`, the value small checkers return when they reject.
    pub fn trivially_true() -> Clause {
        Clause {
            lits: vec![Lit::pos(TermId::TRUE)],
        }
    }

    /// Sorts and deduplicates without checking that atoms are Boolean.
    /// Use [`TermStore::mk_clause`] for unchecked input.
    pub fn from_lits(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause { lits }
    }

    /// Caller guarantees `lits` is strictly increasing.
    pub(crate) fn from_sorted_unchecked(lits: Vec<Lit>) -> Clause {
        debug_assert!(lits.windows(2).all(|w| w[0] < w[1]));
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_trivially_true(&self) -> bool {
        self.lits.len() == 1 && self.lits[0] == Lit::pos(TermId::TRUE)
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// Merge of two canonical clauses, skipping every literal over `pivot`.
    pub fn merge_without(&self, other: &Clause, pivot: TermId) -> Clause {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.lits, &other.lits);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            if next.atom() != pivot {
                out.push(next);
            }
        }
        Clause::from_sorted_unchecked(out)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

impl TermStore {
    /// Canonical clause over Bool-sorted atoms.
    pub fn mk_clause(&self, lits: impl IntoIterator<Item = Lit>) -> Result<Clause, SortError> {
        let lits: Vec<Lit> = lits.into_iter().collect();
        for l in &lits {
            let atom = l.atom();
            if !self.is_valid(atom) || !self.is_bool(atom) {
                return Err(SortError {
                    kind: "clause",
                    child_sorts: if self.is_valid(atom) {
                        vec![self.sort_of(atom).clone()]
                    } else {
                        Vec::new()
                    },
                    reason: format!("literal atom {atom} is not a Bool term"),
                });
            }
        }
        Ok(Clause::from_lits(lits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Sort;

    #[test]
    fn literal_encoding() {
        let t = TermId::from_index(7);
        assert_eq!(Lit::pos(t).code(), 14);
        assert_eq!(Lit::neg(t).code(), 15);
        assert_eq!(Lit::from_code(15), Lit::neg(t));
        assert_eq!(Lit::neg(t).negate(), Lit::pos(t));
        assert_eq!(Lit::neg(t).atom(), t);
    }

    #[test]
    fn canonical_clauses() {
        let mut s = TermStore::new();
        let p = s.var("p", Sort::Bool).unwrap();
        let q = s.var("q", Sort::Bool).unwrap();
        let c = s
            .mk_clause([Lit::neg(p), Lit::pos(q), Lit::neg(p)])
            .unwrap();
        assert_eq!(c.lits(), &[Lit::neg(p), Lit::pos(q)]);
        assert!(s.mk_clause([]).unwrap().is_empty());
        assert_eq!(
            s.mk_clause([Lit::pos(q), Lit::neg(p)]).unwrap(),
            s.mk_clause([Lit::neg(p), Lit::pos(q)]).unwrap()
        );
        let x = s.var("x", Sort::Int).unwrap();
        assert!(s.mk_clause([Lit::pos(x)]).is_err());
    }

    #[test]
    fn trivially_true_shape() {
        let c = Clause::trivially_true();
        assert!(c.is_trivially_true());
        assert!(!Clause::from_lits([Lit::neg(TermId::TRUE)]).is_trivially_true());
    }

    #[test]
    fn merge_drops_pivot() {
        let a = TermId::from_index(3);
        let b = TermId::from_index(4);
        let c1 = Clause::from_lits([Lit::pos(a), Lit::pos(b)]);
        let c2 = Clause::from_lits([Lit::neg(a), Lit::pos(b)]);
        assert_eq!(c1.merge_without(&c2, a).lits(), &[Lit::pos(b)]);
    }
}
