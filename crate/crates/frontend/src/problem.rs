use std::collections::{BTreeMap, HashMap};
use std::fmt;

use certkernel_core::{BvValue, Clause, FunId, FunSym, Node, Sort, TermId, TermStore};
use num_bigint::BigInt;

use crate::error::{FrontendError, ParseError, UnsupportedError};
use crate::sexpr::{Pos, SExpr};

/// Sort of uninterpreted predicate results.
pub const PRED_SORT: &str = "@Pred";
/// The element of [`PRED_SORT`] that stands for "holds".
pub const PRED_TRUE: &str = "@true";
/// Widest bit-vector sort or literal accepted.
pub const MAX_BV_WIDTH: u32 = 1 << 16;

/// Head for a bare predicate application, without the comparison to
/// [`PRED_TRUE`].
pub const RAW_APP: &str = "@app";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Sat,
    QfUf,
    QfLia,
    QfBv,
    QfUflia,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Sat => "SAT",
            Logic::QfUf => "QF_UF",
            Logic::QfLia => "QF_LIA",
            Logic::QfBv => "QF_BV",
            Logic::QfUflia => "QF_UFLIA",
        }
    }

    pub fn from_name(name: &str) -> Option<Logic> {
        [
            Logic::Sat,
            Logic::QfUf,
            Logic::QfLia,
            Logic::QfBv,
            Logic::QfUflia,
        ]
        .into_iter()
        .find(|l| l.name() == name)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Const(TermId),
    Fun(FunId),
}

/// A parsed input problem together with the term store it lives in.
///
/// Certificates are parsed against the same problem so that terms in
/// payloads share ids with the input.
#[derive(Debug, Clone)]
pub struct Problem {
    pub logic: Logic,
    pub store: TermStore,
    pub sorts: BTreeMap<String, Sort>,
    pub symbols: HashMap<String, Symbol>,
    pub assertions: Vec<TermId>,
    /// Input clauses, occupying clause ids `0..inputs.len()`.
    pub inputs: Vec<Clause>,
}

type Res<T> = Result<T, FrontendError>;

fn perr<T>(pos: Pos, msg: impl Into<String>) -> Res<T> {
    Err(ParseError::at(pos, msg).into())
}

fn unsupported<T>(pos: Pos, feature: impl Into<String>) -> Res<T> {
    Err(UnsupportedError::at(pos, feature).into())
}

pub(crate) fn parse_numeral(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub(crate) fn parse_index(e: &SExpr) -> Res<usize> {
    match e
        .atom()
        .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|s| s.parse().ok())
    {
        Some(n) => Ok(n),
        None => perr(e.pos(), "expected a non-negative integer"),
    }
}

fn parse_bv_literal(s: &str, pos: Pos) -> Res<Option<BvValue>> {
    let bits: Vec<bool> = if let Some(b) = s.strip_prefix("#b") {
        if b.is_empty() || !b.bytes().all(|c| c == b'0' || c == b'1') {
            return perr(pos, format!("malformed binary literal `{s}`"));
        }
        b.bytes().rev().map(|c| c == b'1').collect()
    } else if let Some(x) = s.strip_prefix("#x") {
        let mut bits = Vec::with_capacity(4 * x.len());
        for c in x.chars().rev() {
            let Some(d) = c.to_digit(16) else {
                return perr(pos, format!("malformed hexadecimal literal `{s}`"));
            };
            bits.extend((0..4).map(|i| d >> i & 1 == 1));
        }
        if bits.is_empty() {
            return perr(pos, "empty hexadecimal literal");
        }
        bits
    } else {
        return Ok(None);
    };
    if bits.len() > MAX_BV_WIDTH as usize {
        return Err(UnsupportedError::at(pos, format!("bit-vector width {}", bits.len())).into());
    }
    Ok(Some(BvValue::from_bits_lsb_first(bits)))
}

impl Problem {
    pub fn new(logic: Logic) -> Problem {
        Problem {
            logic,
            store: TermStore::new(),
            sorts: BTreeMap::new(),
            symbols: HashMap::new(),
            assertions: Vec::new(),
            inputs: Vec::new(),
        }
    }

    fn pred_true(&mut self) -> TermId {
        self.store
            .var(PRED_TRUE, Sort::Uninterpreted(PRED_SORT.into()))
            .expect("variables are always well-sorted")
    }

    pub fn declare_sort(&mut self, name: &str, pos: Pos) -> Res<()> {
        if self.sorts.contains_key(name) || name == "Bool" || name == "Int" {
            return perr(pos, format!("sort `{name}` already declared"));
        }
        self.sorts
            .insert(name.into(), Sort::Uninterpreted(name.into()));
        Ok(())
    }

    /// Declares a constant (`args` empty) or function symbol. Functions
    /// returning Bool become predicates into [`PRED_SORT`].
    pub fn declare(&mut self, name: &str, args: Vec<Sort>, ret: Sort, pos: Pos) -> Res<Symbol> {
        if self.symbols.contains_key(name) || name.starts_with('@') {
            return perr(pos, format!("symbol `{name}` already declared"));
        }
        let sym = if args.is_empty() {
            match self.store.var(name, ret) {
                Ok(t) => Symbol::Const(t),
                Err(e) => return perr(pos, e.to_string()),
            }
        } else {
            let ret_sort = if ret == Sort::Bool {
                self.pred_true();
                Sort::Uninterpreted(PRED_SORT.into())
            } else {
                ret
            };
            let f = FunSym {
                name: name.into(),
                arg_sorts: args,
                ret_sort,
            };
            match self.store.declare_fun(f) {
                Ok(f) => Symbol::Fun(f),
                Err(e) => return perr(pos, e.to_string()),
            }
        };
        self.symbols.insert(name.into(), sym);
        Ok(sym)
    }

    /// Looks up a Bool constant, declaring it if unknown.
    pub fn bool_const(&mut self, name: &str, pos: Pos) -> Res<TermId> {
        match self.symbols.get(name) {
            Some(&Symbol::Const(t)) if self.store.is_bool(t) => Ok(t),
            Some(_) => perr(pos, format!("`{name}` is declared and not a Bool constant")),
            None => match self.declare(name, vec![], Sort::Bool, pos)? {
                Symbol::Const(t) => Ok(t),
                Symbol::Fun(_) => unreachable!("nullary declarations are constants"),
            },
        }
    }

    pub fn parse_sort(&self, e: &SExpr) -> Res<Sort> {
        match e {
            SExpr::Atom(s, pos) => match s.as_str() {
                "Bool" => Ok(Sort::Bool),
                "Int" => Ok(Sort::Int),
                "Real" => unsupported(*pos, "real arithmetic"),
                _ => match self.sorts.get(s) {
                    Some(sort) => Ok(sort.clone()),
                    None => perr(*pos, format!("unknown sort `{s}`")),
                },
            },
            SExpr::List(items, pos) => match items.as_slice() {
                [u, b, w] if u.atom() == Some("_") && b.atom() == Some("BitVec") => {
                    match w.atom().and_then(|w| w.parse::<u32>().ok()) {
                        Some(n) if n > MAX_BV_WIDTH => {
                            unsupported(w.pos(), format!("bit-vector width {n}"))
                        }
                        Some(n) if n >= 1 => Ok(Sort::BitVec(n)),
                        _ => perr(w.pos(), "bit-vector width must be a positive integer"),
                    }
                }
                _ => unsupported(*pos, "parametric sort"),
            },
            SExpr::Braces(_, pos) => perr(*pos, "expected a sort"),
        }
    }

    fn mk(&mut self, node: Node, pos: Pos) -> Res<TermId> {
        self.store
            .intern(node)
            .or_else(|e| perr(pos, e.to_string()))
    }

    /// Parses a term, expanding `let`.
    pub fn parse_term(&mut self, e: &SExpr) -> Res<TermId> {
        self.term(e, &mut Vec::new())
    }

    pub fn parse_bool_term(&mut self, e: &SExpr) -> Res<TermId> {
        let t = self.parse_term(e)?;
        if !self.store.is_bool(t) {
            return perr(
                e.pos(),
                format!("expected a Bool term, found sort {}", self.store.sort_of(t)),
            );
        }
        Ok(t)
    }

    fn lookup(&mut self, name: &str, pos: Pos, lets: &[HashMap<String, TermId>]) -> Res<TermId> {
        if let Some(t) = lets.iter().rev().find_map(|scope| scope.get(name)) {
            return Ok(*t);
        }
        match (self.symbols.get(name), name) {
            (Some(Symbol::Const(t)), _) => Ok(*t),
            (Some(Symbol::Fun(_)), _) => {
                perr(pos, format!("function `{name}` used without arguments"))
            }
            (None, "true") => Ok(TermId::TRUE),
            (None, "false") => Ok(TermId::FALSE),
            (None, PRED_TRUE) => Ok(self.pred_true()),
            (None, _) => perr(pos, format!("unknown symbol `{name}`")),
        }
    }

    fn term(&mut self, e: &SExpr, lets: &mut Vec<HashMap<String, TermId>>) -> Res<TermId> {
        let pos = e.pos();
        let items = match e {
            SExpr::Atom(s, pos) => {
                if let Some(n) = parse_numeral(s) {
                    return Ok(self.store.int(n));
                }
                if let Some(v) = parse_bv_literal(s, *pos)? {
                    return self.mk(Node::BvConst(v), *pos);
                }
                if s.starts_with(|c: char| c.is_ascii_digit()) {
                    return unsupported(*pos, format!("numeric literal `{s}`"));
                }
                return self.lookup(s, *pos, lets);
            }
            SExpr::Braces(_, pos) => return perr(*pos, "expected a term, found `{`"),
            SExpr::List(items, _) => items.as_slice(),
        };
        let Some((head, args)) = items.split_first() else {
            return perr(pos, "empty application");
        };
        if let SExpr::List(idx, _) = head {
            // ((_ f i) ...) indexed function application
            if idx.first().and_then(SExpr::atom) == Some("_") {
                return unsupported(pos, "indexed bit-vector operation");
            }
            return perr(pos, "expected an operator");
        }
        let Some(op) = head.atom() else {
            return perr(pos, "expected an operator");
        };
        match op {
            "let" => return self.let_term(args, pos, lets),
            "forall" | "exists" => return unsupported(pos, "quantifier"),
            "!" => return unsupported(pos, "term annotation"),
            "_" => return self.indexed_const(args, pos),
            _ => {}
        }
        if op == RAW_APP {
            let Some((f, rest)) = args.split_first() else {
                return perr(pos, "@app needs a function symbol");
            };
            let Some(Symbol::Fun(fid)) = f.atom().and_then(|n| self.symbols.get(n)).copied() else {
                return perr(f.pos(), "@app needs a declared function symbol");
            };
            let kids = self.terms(rest, lets)?;
            return self.mk(Node::Apply(fid, kids), pos);
        }
        if let Some(&Symbol::Fun(f)) = self.symbols.get(op) {
            let kids = self.terms(args, lets)?;
            if kids.len() != self.store.fun(f).arg_sorts.len() {
                return perr(
                    pos,
                    format!(
                        "`{op}` expects {} argument(s)",
                        self.store.fun(f).arg_sorts.len()
                    ),
                );
            }
            let app = self.mk(Node::Apply(f, kids), pos)?;
            if self.store.fun(f).ret_sort == Sort::Uninterpreted(PRED_SORT.into()) {
                let t = self.pred_true();
                return self.mk(Node::Eq([app, t]), pos);
            }
            return Ok(app);
        }
        let kids = self.terms(args, lets)?;
        self.builtin(op, kids, pos)
    }

    fn terms(&mut self, es: &[SExpr], lets: &mut Vec<HashMap<String, TermId>>) -> Res<Vec<TermId>> {
        es.iter().map(|e| self.term(e, lets)).collect()
    }

    fn let_term(
        &mut self,
        args: &[SExpr],
        pos: Pos,
        lets: &mut Vec<HashMap<String, TermId>>,
    ) -> Res<TermId> {
        let [bindings, body] = args else {
            return perr(pos, "let takes a binding list and a body");
        };
        let Some(bindings) = bindings.list() else {
            return perr(bindings.pos(), "expected a binding list");
        };
        let mut scope = HashMap::new();
        for b in bindings {
            match b.list() {
                Some([name, value]) if name.atom().is_some() => {
                    let t = self.term(value, lets)?;
                    if scope
                        .insert(name.atom().unwrap_or_default().to_string(), t)
                        .is_some()
                    {
                        return perr(name.pos(), "duplicate let binding");
                    }
                }
                _ => return perr(b.pos(), "expected (name term)"),
            }
        }
        lets.push(scope);
        let r = self.term(body, lets);
        lets.pop();
        r
    }

    fn indexed_const(&mut self, args: &[SExpr], pos: Pos) -> Res<TermId> {
        // (_ bvN w)
        if let [v, w] = args {
            if let (Some(v), Some(w)) = (v.atom().and_then(|v| v.strip_prefix("bv")), w.atom()) {
                if let (Some(v), Ok(w)) = (
                    parse_numeral(v).filter(|n| n.sign() != num_bigint::Sign::Minus),
                    w.parse::<u32>(),
                ) {
                    if w == 0 {
                        return perr(pos, "bit-vector width must be positive");
                    }
                    if w > MAX_BV_WIDTH {
                        return unsupported(pos, format!("bit-vector width {w}"));
                    }
                    let bits = (0..w as u64).map(|i| v.bit(i)).collect();
                    return self.mk(Node::BvConst(BvValue::from_bits_lsb_first(bits)), pos);
                }
            }
        }
        unsupported(pos, "indexed identifier")
    }

    fn is_constant_arith(&self, t: TermId) -> bool {
        match self.store.node(t) {
            Node::IntConst(_) => true,
            Node::Var(..) | Node::Apply(..) | Node::Ite(_) => false,
            n => n.children().iter().all(|&c| self.is_constant_arith(c)),
        }
    }

    fn builtin(&mut self, op: &str, kids: Vec<TermId>, pos: Pos) -> Res<TermId> {
        let n = kids.len();
        let arity = |ok: bool| {
            if ok {
                Ok(())
            } else {
                perr(pos, format!("wrong number of arguments for `{op}`"))
            }
        };
        let two = |k: &[TermId]| [k[0], k[1]];
        match op {
            "not" => {
                arity(n == 1)?;
                self.mk(Node::Not(kids[0]), pos)
            }
            "and" | "or" => {
                if kids.is_empty() {
                    return Ok(self.store.bool_const(op == "and"));
                }
                self.mk(
                    if op == "and" {
                        Node::And(kids)
                    } else {
                        Node::Or(kids)
                    },
                    pos,
                )
            }
            "=>" => {
                arity(n >= 2)?;
                let mut acc = kids[n - 1];
                for &a in kids[..n - 1].iter().rev() {
                    acc = self.mk(Node::Implies([a, acc]), pos)?;
                }
                Ok(acc)
            }
            "xor" => {
                arity(n >= 2)?;
                let mut acc = kids[0];
                for &b in &kids[1..] {
                    acc = self.mk(Node::Xor([acc, b]), pos)?;
                }
                Ok(acc)
            }
            "ite" => {
                arity(n == 3)?;
                self.mk(Node::Ite([kids[0], kids[1], kids[2]]), pos)
            }
            "=" => {
                arity(n >= 2)?;
                let mut pairs = Vec::with_capacity(n - 1);
                for w in kids.windows(2) {
                    let node = if self.store.is_bool(w[0]) {
                        Node::Iff(two(w))
                    } else {
                        Node::Eq(two(w))
                    };
                    pairs.push(self.mk(node, pos)?);
                }
                if pairs.len() == 1 {
                    Ok(pairs[0])
                } else {
                    self.mk(Node::And(pairs), pos)
                }
            }
            "distinct" => {
                arity(n >= 2)?;
                let mut diffs = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let pair = [kids[i], kids[j]];
                        let eq = if self.store.is_bool(kids[i]) {
                            Node::Iff(pair)
                        } else {
                            Node::Eq(pair)
                        };
                        let eq = self.mk(eq, pos)?;
                        diffs.push(self.mk(Node::Not(eq), pos)?);
                    }
                }
                if diffs.len() == 1 {
                    Ok(diffs[0])
                } else {
                    self.mk(Node::And(diffs), pos)
                }
            }
            "<=" | "<" | ">=" | ">" => {
                if n != 2 {
                    return unsupported(pos, "chained comparison");
                }
                let node = match op {
                    "<=" => Node::Le([kids[0], kids[1]]),
                    "<" => Node::Lt([kids[0], kids[1]]),
                    ">=" => Node::Le([kids[1], kids[0]]),
                    _ => Node::Lt([kids[1], kids[0]]),
                };
                self.mk(node, pos)
            }
            "+" => {
                arity(n >= 2)?;
                self.mk(Node::Add(kids), pos)
            }
            "-" => {
                arity(n >= 1)?;
                if n == 1 {
                    return self.mk(Node::Neg(kids[0]), pos);
                }
                let mut acc = kids[0];
                for &b in &kids[1..] {
                    acc = self.mk(Node::Sub([acc, b]), pos)?;
                }
                Ok(acc)
            }
            "*" => {
                arity(n >= 2)?;
                let mut acc = kids[0];
                for &b in &kids[1..] {
                    if !self.is_constant_arith(acc) && !self.is_constant_arith(b) {
                        return unsupported(pos, "nonlinear multiplication");
                    }
                    acc = self.mk(Node::Mul([acc, b]), pos)?;
                }
                Ok(acc)
            }
            "div" | "mod" | "abs" | "/" => unsupported(pos, format!("`{op}`")),
            "bvnot" => {
                arity(n == 1)?;
                self.mk(Node::BvNot(kids[0]), pos)
            }
            "bvand" | "bvor" | "bvxor" | "bvadd" => {
                arity(n >= 2)?;
                let mut acc = kids[0];
                for &b in &kids[1..] {
                    let node = match op {
                        "bvand" => Node::BvAnd([acc, b]),
                        "bvor" => Node::BvOr([acc, b]),
                        "bvxor" => Node::BvXor([acc, b]),
                        _ => Node::BvAdd([acc, b]),
                    };
                    acc = self.mk(node, pos)?;
                }
                Ok(acc)
            }
            "bvult" => {
                arity(n == 2)?;
                self.mk(Node::BvUlt(two(&kids)), pos)
            }
            _ if op.starts_with("bv") => unsupported(pos, format!("bit-vector operation `{op}`")),
            _ => perr(pos, format!("unknown function `{op}`")),
        }
    }
}
