use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

/// Sort of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    Int,
    BitVec(u32),
    Uninterpreted(Arc<str>),
}

impl Sort {
    pub fn bv_width(&self) -> Option<u32> {
        match self {
            Sort::BitVec(w) => Some(*w),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => f.write_str("Bool"),
            Sort::Int => f.write_str("Int"),
            Sort::BitVec(w) => write!(f, "(_ BitVec {w})"),
            Sort::Uninterpreted(name) => f.write_str(name),
        }
    }
}

/// An uninterpreted function symbol with its (unique) signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunSym {
    pub name: Arc<str>,
    pub arg_sorts: Vec<Sort>,
    pub ret_sort: Sort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunId(u32);

impl FunId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Dense index into a [`TermStore`].
///
/// Children are always interned before their parents, so a child id is
/// strictly smaller than the id of any term containing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    /// `true`, interned first in every store.
    pub const TRUE: TermId = TermId(0);
    /// `false`, interned second in every store.
    pub const FALSE: TermId = TermId(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> TermId {
        TermId(u32::try_from(index).expect("term store exceeds u32 ids"))
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Bit-vector constant, least-significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BvValue {
    bits: Vec<bool>,
}

impl BvValue {
    pub fn from_bits_lsb_first(bits: Vec<bool>) -> BvValue {
        BvValue { bits }
    }

    /// Low `width` bits of `value`.
    pub fn from_u128(value: u128, width: u32) -> BvValue {
        let bits = (0..width)
            .map(|i| i < 128 && (value >> i) & 1 == 1)
            .collect();
        BvValue { bits }
    }

    pub fn width(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn to_u128(&self) -> Option<u128> {
        if self.bits.len() > 128 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| acc | (u128::from(b) << i)),
        )
    }
}

impl fmt::Display for BvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("#b")?;
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One node of the term DAG. Children are [`TermId`]s into the same store.
///
/// Equality on `Bool` is expressed with [`Node::Iff`]; [`Node::Eq`] is
/// reserved for the other sorts so that every Boolean biconditional has a
/// single representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Var(Arc<str>, Sort),
    IntConst(BigInt),
    BvConst(BvValue),
    Apply(FunId, Vec<TermId>),
    Eq([TermId; 2]),
    Le([TermId; 2]),
    Lt([TermId; 2]),
    Add(Vec<TermId>),
    Sub([TermId; 2]),
    Neg(TermId),
    Mul([TermId; 2]),
    True,
    False,
    Not(TermId),
    And(Vec<TermId>),
    Or(Vec<TermId>),
    Implies([TermId; 2]),
    Xor([TermId; 2]),
    Iff([TermId; 2]),
    Ite([TermId; 3]),
    BvNot(TermId),
    BvAnd([TermId; 2]),
    BvOr([TermId; 2]),
    BvXor([TermId; 2]),
    BvAdd([TermId; 2]),
    BvUlt([TermId; 2]),
}

impl Node {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Node::Var(..) => "var",
            Node::IntConst(_) => "int-const",
            Node::BvConst(_) => "bv-const",
            Node::Apply(..) => "apply",
            Node::Eq(_) => "=",
            Node::Le(_) => "<=",
            Node::Lt(_) => "<",
            Node::Add(_) => "+",
            Node::Sub(_) => "-",
            Node::Neg(_) => "neg",
            Node::Mul(_) => "*",
            Node::True => "true",
            Node::False => "false",
            Node::Not(_) => "not",
            Node::And(_) => "and",
            Node::Or(_) => "or",
            Node::Implies(_) => "=>",
            Node::Xor(_) => "xor",
            Node::Iff(_) => "iff",
            Node::Ite(_) => "ite",
            Node::BvNot(_) => "bvnot",
            Node::BvAnd(_) => "bvand",
            Node::BvOr(_) => "bvor",
            Node::BvXor(_) => "bvxor",
            Node::BvAdd(_) => "bvadd",
            Node::BvUlt(_) => "bvult",
        }
    }

    /// The same node with every child replaced by `f(child)`.
    pub fn map_children(&self, f: impl FnMut(TermId) -> TermId) -> Node {
        let k: Vec<TermId> = self.children().iter().copied().map(f).collect();
        let two = [
            k.first().copied().unwrap_or(TermId(0)),
            k.get(1).copied().unwrap_or(TermId(0)),
        ];
        match self {
            Node::Var(..) | Node::IntConst(_) | Node::BvConst(_) | Node::True | Node::False => {
                self.clone()
            }
            Node::Apply(g, _) => Node::Apply(*g, k),
            Node::Add(_) => Node::Add(k),
            Node::And(_) => Node::And(k),
            Node::Or(_) => Node::Or(k),
            Node::Neg(_) => Node::Neg(k[0]),
            Node::Not(_) => Node::Not(k[0]),
            Node::BvNot(_) => Node::BvNot(k[0]),
            Node::Eq(_) => Node::Eq(two),
            Node::Le(_) => Node::Le(two),
            Node::Lt(_) => Node::Lt(two),
            Node::Sub(_) => Node::Sub(two),
            Node::Mul(_) => Node::Mul(two),
            Node::Implies(_) => Node::Implies(two),
            Node::Xor(_) => Node::Xor(two),
            Node::Iff(_) => Node::Iff(two),
            Node::BvAnd(_) => Node::BvAnd(two),
            Node::BvOr(_) => Node::BvOr(two),
            Node::BvXor(_) => Node::BvXor(two),
            Node::BvAdd(_) => Node::BvAdd(two),
            Node::BvUlt(_) => Node::BvUlt(two),
            Node::Ite(_) => Node::Ite([k[0], k[1], k[2]]),
        }
    }

    pub fn children(&self) -> &[TermId] {
        match self {
            Node::Var(..) | Node::IntConst(_) | Node::BvConst(_) | Node::True | Node::False => &[],
            Node::Apply(_, args) | Node::Add(args) | Node::And(args) | Node::Or(args) => args,
            Node::Neg(a) | Node::Not(a) | Node::BvNot(a) => std::slice::from_ref(a),
            Node::Eq(ab)
            | Node::Le(ab)
            | Node::Lt(ab)
            | Node::Sub(ab)
            | Node::Mul(ab)
            | Node::Implies(ab)
            | Node::Xor(ab)
            | Node::Iff(ab)
            | Node::BvAnd(ab)
            | Node::BvOr(ab)
            | Node::BvXor(ab)
            | Node::BvAdd(ab)
            | Node::BvUlt(ab) => ab,
            Node::Ite(cte) => cte,
        }
    }
}

/// An ill-sorted node, a bad child id, or a conflicting declaration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-sorted `{kind}`: {reason} (child sorts: {})", display_sorts(.child_sorts))]
pub struct SortError {
    pub kind: &'static str,
    pub child_sorts: Vec<Sort>,
    pub reason: String,
}

fn display_sorts(sorts: &[Sort]) -> String {
    let parts: Vec<String> = sorts.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Append-only hash-consing store for one problem.
#[derive(Debug, Clone)]
pub struct TermStore {
    nodes: Vec<Node>,
    sorts: Vec<Sort>,
    index: HashMap<Node, TermId>,
    funs: Vec<FunSym>,
    fun_index: HashMap<Arc<str>, FunId>,
}

impl Default for TermStore {
    fn default() -> Self {
        TermStore::new()
    }
}

impl TermStore {
    pub fn new() -> TermStore {
        let mut store = TermStore {
            nodes: Vec::new(),
            sorts: Vec::new(),
            index: HashMap::new(),
            funs: Vec::new(),
            fun_index: HashMap::new(),
        };
        let t = store.intern(Node::True).expect("true is well-sorted");
        let f = store.intern(Node::False).expect("false is well-sorted");
        debug_assert_eq!((t, f), (TermId::TRUE, TermId::FALSE));
        store
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_valid(&self, t: TermId) -> bool {
        t.index() < self.nodes.len()
    }

    /// Panics on an id from another store.
    pub fn node(&self, t: TermId) -> &Node {
        &self.nodes[t.index()]
    }

    pub fn sort_of(&self, t: TermId) -> &Sort {
        &self.sorts[t.index()]
    }

    pub fn is_bool(&self, t: TermId) -> bool {
        matches!(self.sort_of(t), Sort::Bool)
    }

    /// Looks up an already interned node without inserting it.
    pub fn find(&self, node: &Node) -> Option<TermId> {
        self.index.get(node).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, &Node)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (TermId::from_index(i), n))
    }

    /// Declares `sym`. Re-declaring with the identical signature returns the
    /// existing id; any other re-declaration is an error.
    pub fn declare_fun(&mut self, sym: FunSym) -> Result<FunId, SortError> {
        if let Some(&id) = self.fun_index.get(&sym.name) {
            if self.funs[id.index()] == sym {
                return Ok(id);
            }
            return Err(SortError {
                kind: "declare-fun",
                child_sorts: sym.arg_sorts.clone(),
                reason: format!("`{}` is already declared with another signature", sym.name),
            });
        }
        for s in sym.arg_sorts.iter().chain(std::iter::once(&sym.ret_sort)) {
            check_sort(s, "declare-fun")?;
        }
        let id = FunId(self.funs.len() as u32);
        self.fun_index.insert(sym.name.clone(), id);
        self.funs.push(sym);
        Ok(id)
    }

    pub fn fun(&self, id: FunId) -> &FunSym {
        &self.funs[id.index()]
    }

    pub fn fun_by_name(&self, name: &str) -> Option<FunId> {
        self.fun_index.get(name).copied()
    }

    pub fn funs(&self) -> impl Iterator<Item = (FunId, &FunSym)> {
        self.funs
            .iter()
            .enumerate()
            .map(|(i, f)| (FunId(i as u32), f))
    }

    /// Hash-conses `node`: returns the existing id when the same structure is
    /// already present, otherwise sort-checks and appends it.
    pub fn intern(&mut self, node: Node) -> Result<TermId, SortError> {
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        let sort = self.compute_sort(&node)?;
        let id = TermId::from_index(self.nodes.len());
        self.nodes.push(node.clone());
        self.sorts.push(sort);
        self.index.insert(node, id);
        Ok(id)
    }

    fn compute_sort(&self, node: &Node) -> Result<Sort, SortError> {
        let kind = node.kind_name();
        for &c in node.children() {
            if !self.is_valid(c) {
                return Err(SortError {
                    kind,
                    child_sorts: Vec::new(),
                    reason: format!("child {c} is not in the store"),
                });
            }
        }
        let child_sorts: Vec<Sort> = node
            .children()
            .iter()
            .map(|&c| self.sort_of(c).clone())
            .collect();
        let fail = |reason: &str| SortError {
            kind,
            child_sorts: child_sorts.clone(),
            reason: reason.to_string(),
        };
        let all = |s: &Sort| child_sorts.iter().all(|c| c == s);
        let same_bv = || match child_sorts.first() {
            Some(Sort::BitVec(w)) if all(&Sort::BitVec(*w)) => Some(*w),
            _ => None,
        };
        let sort = match node {
            Node::Var(_, sort) => {
                check_sort(sort, kind)?;
                sort.clone()
            }
            Node::IntConst(_) => Sort::Int,
            Node::BvConst(v) => {
                if v.width() == 0 {
                    return Err(fail("bit-vector constants need width >= 1"));
                }
                Sort::BitVec(v.width())
            }
            Node::Apply(f, _) => {
                let sym = self
                    .funs
                    .get(f.index())
                    .ok_or_else(|| fail("undeclared function symbol"))?;
                if sym.arg_sorts != child_sorts {
                    return Err(SortError {
                        kind,
                        child_sorts,
                        reason: format!(
                            "`{}` expects arguments {}",
                            sym.name,
                            display_sorts(&sym.arg_sorts)
                        ),
                    });
                }
                sym.ret_sort.clone()
            }
            Node::Eq(_) => {
                if child_sorts[0] != child_sorts[1] {
                    return Err(fail("sides of an equality must have the same sort"));
                }
                if child_sorts[0] == Sort::Bool {
                    return Err(fail("Boolean equality is written as iff"));
                }
                Sort::Bool
            }
            Node::Le(_) | Node::Lt(_) => {
                if !all(&Sort::Int) {
                    return Err(fail("comparison expects Int arguments"));
                }
                Sort::Bool
            }
            Node::Add(args) => {
                if args.len() < 2 || !all(&Sort::Int) {
                    return Err(fail("+ expects at least two Int arguments"));
                }
                Sort::Int
            }
            Node::Sub(_) | Node::Neg(_) | Node::Mul(_) => {
                if !all(&Sort::Int) {
                    return Err(fail("arithmetic expects Int arguments"));
                }
                Sort::Int
            }
            Node::True | Node::False => Sort::Bool,
            Node::Not(_) | Node::Implies(_) | Node::Xor(_) | Node::Iff(_) => {
                if !all(&Sort::Bool) {
                    return Err(fail("connective expects Bool arguments"));
                }
                Sort::Bool
            }
            Node::And(args) | Node::Or(args) => {
                if args.is_empty() || !all(&Sort::Bool) {
                    return Err(fail("connective expects at least one Bool argument"));
                }
                Sort::Bool
            }
            Node::Ite(_) => {
                if child_sorts[0] != Sort::Bool || child_sorts[1] != child_sorts[2] {
                    return Err(fail(
                        "ite expects a Bool condition and branches of one sort",
                    ));
                }
                child_sorts[1].clone()
            }
            Node::BvNot(_) | Node::BvAnd(_) | Node::BvOr(_) | Node::BvXor(_) | Node::BvAdd(_) => {
                let w = same_bv().ok_or_else(|| fail("expects bit-vectors of one width"))?;
                Sort::BitVec(w)
            }
            Node::BvUlt(_) => {
                same_bv().ok_or_else(|| fail("expects bit-vectors of one width"))?;
                Sort::Bool
            }
        };
        Ok(sort)
    }

    // Builders for the nodes the checkers construct themselves.

    pub fn var(&mut self, name: &str, sort: Sort) -> Result<TermId, SortError> {
        self.intern(Node::Var(Arc::from(name), sort))
    }

    pub fn int(&mut self, value: impl Into<BigInt>) -> TermId {
        self.intern(Node::IntConst(value.into()))
            .expect("integer constants are well-sorted")
    }

    pub fn bool_const(&self, value: bool) -> TermId {
        if value {
            TermId::TRUE
        } else {
            TermId::FALSE
        }
    }

    pub fn not(&mut self, a: TermId) -> Result<TermId, SortError> {
        self.intern(Node::Not(a))
    }

    pub fn and(&mut self, args: Vec<TermId>) -> Result<TermId, SortError> {
        self.intern(Node::And(args))
    }

    pub fn or(&mut self, args: Vec<TermId>) -> Result<TermId, SortError> {
        self.intern(Node::Or(args))
    }

    pub fn xor(&mut self, a: TermId, b: TermId) -> Result<TermId, SortError> {
        self.intern(Node::Xor([a, b]))
    }

    pub fn iff(&mut self, a: TermId, b: TermId) -> Result<TermId, SortError> {
        self.intern(Node::Iff([a, b]))
    }

    pub fn eq(&mut self, a: TermId, b: TermId) -> Result<TermId, SortError> {
        self.intern(Node::Eq([a, b]))
    }
}

fn check_sort(sort: &Sort, kind: &'static str) -> Result<(), SortError> {
    if *sort == Sort::BitVec(0) {
        return Err(SortError {
            kind,
            child_sorts: vec![sort.clone()],
            reason: "bit-vector width must be at least 1".into(),
        });
    }
    Ok(())
}
