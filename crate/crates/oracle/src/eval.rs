use std::collections::HashMap;
use std::fmt;

use certkernel_core::{Clause, FunId, Node, Sort, TermId, TermStore};
use num_traits::ToPrimitive;
use thiserror::Error;

/// A ground value. Bit-vectors are stored as `(bits, width)` with `width <= 128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Int(i128),
    Bv(u128, u32),
    /// The `n`-th element of an uninterpreted sort.
    Elem(u32),
}

impl Value {
    fn as_bool(self) -> Result<bool, EvalError> {
        match self {
            Value::Bool(b) => Ok(b),
            v => Err(EvalError::IllSorted(format!("expected Bool, got {v:?}"))),
        }
    }

    fn as_int(self) -> Result<i128, EvalError> {
        match self {
            Value::Int(i) => Ok(i),
            v => Err(EvalError::IllSorted(format!("expected Int, got {v:?}"))),
        }
    }

    fn as_bv(self) -> Result<(u128, u32), EvalError> {
        match self {
            Value::Bv(v, w) => Ok((v, w)),
            v => Err(EvalError::IllSorted(format!(
                "expected a bit-vector, got {v:?}"
            ))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("model has no value for {0}")]
    Incomplete(String),
    #[error("integer overflow while evaluating {0}")]
    Overflow(TermId),
    #[error("bit-vector width {0} exceeds 128")]
    TooWide(u32),
    #[error("ill-sorted value: {0}")]
    IllSorted(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Bv(v, w) => write!(f, "#b{v:0w$b}", w = w as usize),
            Value::Elem(n) => write!(f, "@elem{n}"),
        }
    }
}

/// Interpretation of one function symbol: explicit points plus a default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunTable {
    pub points: HashMap<Vec<Value>, Value>,
    pub default: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    /// Values of `Var` terms.
    pub vars: HashMap<TermId, Value>,
    pub funs: HashMap<FunId, FunTable>,
}

fn mask(width: u32) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

/// Value of a non-leaf, non-application node from the values of its children.
pub(crate) fn apply_op(t: TermId, node: &Node, kids: &[Value]) -> Result<Value, EvalError> {
    use Value::*;
    let ovf = || EvalError::Overflow(t);
    let int2 = || -> Result<(i128, i128), EvalError> { Ok((kids[0].as_int()?, kids[1].as_int()?)) };
    let bv2 = || -> Result<(u128, u128, u32), EvalError> {
        let (a, w) = kids[0].as_bv()?;
        let (b, _) = kids[1].as_bv()?;
        Ok((a, b, w))
    };
    Ok(match node {
        Node::Eq(_) => Bool(kids[0] == kids[1]),
        Node::Le(_) => {
            let (a, b) = int2()?;
            Bool(a <= b)
        }
        Node::Lt(_) => {
            let (a, b) = int2()?;
            Bool(a < b)
        }
        Node::Add(_) => {
            let mut acc: i128 = 0;
            for k in kids {
                acc = acc.checked_add(k.as_int()?).ok_or_else(ovf)?;
            }
            Int(acc)
        }
        Node::Sub(_) => {
            let (a, b) = int2()?;
            Int(a.checked_sub(b).ok_or_else(ovf)?)
        }
        Node::Neg(_) => Int(kids[0].as_int()?.checked_neg().ok_or_else(ovf)?),
        Node::Mul(_) => {
            let (a, b) = int2()?;
            Int(a.checked_mul(b).ok_or_else(ovf)?)
        }
        Node::Not(_) => Bool(!kids[0].as_bool()?),
        Node::And(_) => {
            let mut all = true;
            for k in kids {
                all &= k.as_bool()?;
            }
            Bool(all)
        }
        Node::Or(_) => {
            let mut any = false;
            for k in kids {
                any |= k.as_bool()?;
            }
            Bool(any)
        }
        Node::Implies(_) => Bool(!kids[0].as_bool()? || kids[1].as_bool()?),
        Node::Xor(_) => Bool(kids[0].as_bool()? != kids[1].as_bool()?),
        Node::Iff(_) => Bool(kids[0].as_bool()? == kids[1].as_bool()?),
        Node::Ite(_) => {
            if kids[0].as_bool()? {
                kids[1]
            } else {
                kids[2]
            }
        }
        Node::BvNot(_) => {
            let (a, w) = kids[0].as_bv()?;
            Bv(!a & mask(w), w)
        }
        Node::BvAnd(_) => {
            let (a, b, w) = bv2()?;
            Bv(a & b, w)
        }
        Node::BvOr(_) => {
            let (a, b, w) = bv2()?;
            Bv(a | b, w)
        }
        Node::BvXor(_) => {
            let (a, b, w) = bv2()?;
            Bv(a ^ b, w)
        }
        Node::BvAdd(_) => {
            let (a, b, w) = bv2()?;
            Bv(a.wrapping_add(b) & mask(w), w)
        }
        Node::BvUlt(_) => {
            let (a, b, _) = bv2()?;
            Bool(a < b)
        }
        Node::True => Bool(true),
        Node::False => Bool(false),
        Node::IntConst(c) => Int(c.to_i128().ok_or_else(ovf)?),
        Node::BvConst(v) => {
            if v.width() > 128 {
                return Err(EvalError::TooWide(v.width()));
            }
            Bv(v.to_u128().unwrap_or(0), v.width())
        }
        Node::Var(..) | Node::Apply(..) => {
            unreachable!("leaves are valued by the caller")
        }
    })
}

/// Evaluates `t` under `model`.
pub fn eval(store: &TermStore, model: &Model, t: TermId) -> Result<Value, EvalError> {
    let mut memo: HashMap<TermId, Value> = HashMap::new();
    eval_memo(store, model, t, &mut memo)
}

fn eval_memo(
    store: &TermStore,
    model: &Model,
    t: TermId,
    memo: &mut HashMap<TermId, Value>,
) -> Result<Value, EvalError> {
    if let Some(&v) = memo.get(&t) {
        return Ok(v);
    }
    let node = store.node(t);
    let v = match node {
        Node::Var(name, _) => *model
            .vars
            .get(&t)
            .ok_or_else(|| EvalError::Incomplete(name.to_string()))?,
        Node::Apply(f, args) => {
            let args = args
                .iter()
                .map(|&a| eval_memo(store, model, a, memo))
                .collect::<Result<Vec<_>, _>>()?;
            let table = model
                .funs
                .get(f)
                .ok_or_else(|| EvalError::Incomplete(store.fun(*f).name.to_string()))?;
            *table.points.get(&args).unwrap_or(&table.default)
        }
        _ => {
            let kids = node
                .children()
                .iter()
                .map(|&c| eval_memo(store, model, c, memo))
                .collect::<Result<Vec<_>, _>>()?;
            apply_op(t, node, &kids)?
        }
    };
    memo.insert(t, v);
    Ok(v)
}

/// Whether some literal of `clause` is true under `model`.
pub fn eval_clause(store: &TermStore, model: &Model, clause: &Clause) -> Result<bool, EvalError> {
    let mut memo = HashMap::new();
    for &lit in clause.lits() {
        if eval_memo(store, model, lit.atom(), &mut memo)?.as_bool()? == lit.is_positive() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Default value of a sort, used for function tables.
pub(crate) fn default_value(sort: &Sort) -> Value {
    match sort {
        Sort::Bool => Value::Bool(false),
        Sort::Int => Value::Int(0),
        Sort::BitVec(w) => Value::Bv(0, *w),
        Sort::Uninterpreted(_) => Value::Elem(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use certkernel_core::{FunSym, Lit};

    #[test]
    fn arithmetic_and_bitvectors() {
        let mut s = TermStore::new();
        let x = s.var("x", Sort::Int).unwrap();
        let three = s.int(3);
        let sum = s.intern(Node::Add(vec![x, three])).unwrap();
        let le = s.intern(Node::Le([sum, three])).unwrap();
        let b = s.var("b", Sort::BitVec(4)).unwrap();
        let nb = s.intern(Node::BvNot(b)).unwrap();
        let add = s.intern(Node::BvAdd([b, nb])).unwrap();
        let mut m = Model::default();
        m.vars.insert(x, Value::Int(-1));
        m.vars.insert(b, Value::Bv(0b0101, 4));
        assert_eq!(eval(&s, &m, sum), Ok(Value::Int(2)));
        assert_eq!(eval(&s, &m, le), Ok(Value::Bool(true)));
        assert_eq!(eval(&s, &m, add), Ok(Value::Bv(0b1111, 4)));
    }

    #[test]
    fn function_tables_and_clauses() {
        let mut s = TermStore::new();
        let u = Sort::Uninterpreted("U".into());
        let f = s
            .declare_fun(FunSym {
                name: "f".into(),
                arg_sorts: vec![u.clone()],
                ret_sort: u.clone(),
            })
            .unwrap();
        let a = s.var("a", u).unwrap();
        let fa = s.intern(Node::Apply(f, vec![a])).unwrap();
        let eq = s.eq(fa, a).unwrap();
        let mut m = Model::default();
        m.vars.insert(a, Value::Elem(1));
        let mut points = HashMap::new();
        points.insert(vec![Value::Elem(1)], Value::Elem(1));
        m.funs.insert(
            f,
            FunTable {
                points,
                default: Value::Elem(0),
            },
        );
        let c = Clause::from_lits([Lit::pos(eq)]);
        assert_eq!(eval_clause(&s, &m, &c), Ok(true));
        m.vars.insert(a, Value::Elem(2));
        assert_eq!(eval_clause(&s, &m, &c), Ok(false));
        assert!(eval(&s, &Model::default(), eq).is_err());
    }
}
