//! Rendering terms and clauses in the concrete syntax the parsers accept.

use std::fmt::Write as _;

use certkernel_core::{Clause, Lit, Node, Sort, TermId, TermStore};

use crate::problem::{Problem, Symbol, PRED_SORT, PRED_TRUE, RAW_APP};

fn is_pred(store: &TermStore, t: TermId) -> bool {
    matches!(store.sort_of(t), Sort::Uninterpreted(s) if &**s == PRED_SORT)
}

fn write_symbol(name: &str, out: &mut String) {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '{' | '}' | ';' | '|' | '"'));
    if plain {
        out.push_str(name);
    } else {
        let _ = write!(out, "|{name}|");
    }
}

pub fn write_term(store: &TermStore, t: TermId, out: &mut String) {
    let node = store.node(t);
    let op = match node {
        Node::Var(name, _) => return write_symbol(name, out),
        Node::IntConst(n) => {
            let _ = write!(out, "{n}");
            return;
        }
        Node::BvConst(v) => {
            let _ = write!(out, "{v}");
            return;
        }
        Node::True => return out.push_str("true"),
        Node::False => return out.push_str("false"),
        Node::Apply(f, args) => {
            out.push('(');
            if is_pred(store, t) {
                out.push_str(RAW_APP);
                out.push(' ');
            }
            write_symbol(&store.fun(*f).name, out);
            for &a in args {
                out.push(' ');
                write_term(store, a, out);
            }
            out.push(')');
            return;
        }
        &Node::Eq([app, c])
            if is_pred(store, app)
                && matches!(store.node(app), Node::Apply(..))
                && matches!(store.node(c), Node::Var(n, _) if &**n == PRED_TRUE) =>
        {
            let Node::Apply(f, args) = store.node(app) else {
                unreachable!()
            };
            out.push('(');
            write_symbol(&store.fun(*f).name, out);
            for &a in args {
                out.push(' ');
                write_term(store, a, out);
            }
            out.push(')');
            return;
        }
        Node::Eq(_) | Node::Iff(_) => "=",
        Node::Le(_) => "<=",
        Node::Lt(_) => "<",
        Node::Add(_) => "+",
        Node::Sub(_) | Node::Neg(_) => "-",
        Node::Mul(_) => "*",
        Node::Not(_) => "not",
        Node::And(_) => "and",
        Node::Or(_) => "or",
        Node::Implies(_) => "=>",
        Node::Xor(_) => "xor",
        Node::Ite(_) => "ite",
        Node::BvNot(_) => "bvnot",
        Node::BvAnd(_) => "bvand",
        Node::BvOr(_) => "bvor",
        Node::BvXor(_) => "bvxor",
        Node::BvAdd(_) => "bvadd",
        Node::BvUlt(_) => "bvult",
    };
    out.push('(');
    out.push_str(op);
    for &c in node.children() {
        out.push(' ');
        write_term(store, c, out);
    }
    out.push(')');
}

pub fn term_to_string(store: &TermStore, t: TermId) -> String {
    let mut s = String::new();
    write_term(store, t, &mut s);
    s
}

pub fn write_lit(store: &TermStore, lit: Lit, out: &mut String) {
    if lit.is_positive() {
        write_term(store, lit.atom(), out);
    } else {
        out.push_str("(neg ");
        write_term(store, lit.atom(), out);
        out.push(')');
    }
}

/// `(cl lit ...)`, literals in the given order.
pub fn write_lits(store: &TermStore, lits: &[Lit], out: &mut String) {
    out.push_str("(cl");
    for &l in lits {
        out.push(' ');
        write_lit(store, l, out);
    }
    out.push(')');
}

pub fn clause_to_string(store: &TermStore, c: &Clause) -> String {
    let mut s = String::new();
    write_lits(store, c.lits(), &mut s);
    s
}

fn write_sort(sort: &Sort, out: &mut String) {
    match sort {
        Sort::Uninterpreted(name) if &**name == PRED_SORT => out.push_str("Bool"),
        Sort::Uninterpreted(name) => write_symbol(name, out),
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

/// Renders `problem` as an SMT-LIB 2 script that [`crate::parse_smt2`]
/// reads back to the same declarations and assertions.
pub fn print_smt2(problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(set-logic {})", problem.logic);
    for name in problem.sorts.keys() {
        out.push_str("(declare-sort ");
        write_symbol(name, &mut out);
        out.push_str(" 0)\n");
    }
    let mut consts: Vec<(&String, TermId)> = Vec::new();
    let mut funs = Vec::new();
    for (name, sym) in &problem.symbols {
        match *sym {
            Symbol::Const(t) => consts.push((name, t)),
            Symbol::Fun(f) => funs.push((name, f)),
        }
    }
    consts.sort_by_key(|&(_, t)| t);
    funs.sort_by_key(|&(_, f)| f.index());
    for (name, t) in consts {
        out.push_str("(declare-const ");
        write_symbol(name, &mut out);
        out.push(' ');
        write_sort(problem.store.sort_of(t), &mut out);
        out.push_str(")\n");
    }
    for (name, f) in funs {
        let sym = problem.store.fun(f);
        out.push_str("(declare-fun ");
        write_symbol(name, &mut out);
        out.push_str(" (");
        for (i, s) in sym.arg_sorts.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write_sort(s, &mut out);
        }
        out.push_str(") ");
        write_sort(&sym.ret_sort, &mut out);
        out.push_str(")\n");
    }
    for &a in &problem.assertions {
        out.push_str("(assert ");
        write_term(&problem.store, a, &mut out);
        out.push_str(")\n");
    }
    out.push_str("(check-sat)\n");
    out
}
