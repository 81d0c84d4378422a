//! The linear certificate format.
//!
//! ```text
//! <id> <rule> (<premise ids>) {<payload>}
//! qed <id>
//! ```
//!
//! Steps are read as a token stream, so line breaks are not significant.
//! Payload terms use the SMT-LIB term syntax of the problem.

use std::fmt::Write as _;

use certkernel_core::{Lit, TermId, TermStore};
use certkernel_kernel::bv::BvPayload;
use certkernel_kernel::euf::{EqRule, EqStep, EufPayload};
use certkernel_kernel::lia::{LiaPayload, RowRef};
use certkernel_kernel::res::CnfPayload;
use certkernel_kernel::{Certificate, ClauseId, Payload, RuleKind, Step};
use num_bigint::BigInt;

use crate::error::{FrontendError, ParseError, ReferenceError};
use crate::print::{write_lits, write_term};
use crate::problem::{parse_index, parse_numeral, Problem, Symbol};
use crate::sexpr::{decode_utf8, read_all, Pos, SExpr};

type Res<T> = Result<T, FrontendError>;

fn perr<T>(pos: Pos, msg: impl Into<String>) -> Res<T> {
    Err(ParseError::at(pos, msg).into())
}

pub fn parse_rule(e: &SExpr) -> Res<RuleKind> {
    match e.atom().and_then(RuleKind::from_name) {
        Some(r) => Ok(r),
        None => perr(
            e.pos(),
            format!("unknown rule `{}`", e.atom().unwrap_or("(...)")),
        ),
    }
}

fn parse_step_id(e: &SExpr) -> Res<u32> {
    match e
        .atom()
        .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|s| s.parse().ok())
    {
        Some(n) => Ok(n),
        None => perr(e.pos(), "expected a clause id"),
    }
}

fn parse_coeff(e: &SExpr) -> Res<BigInt> {
    match e.atom().and_then(parse_numeral) {
        Some(n) => Ok(n),
        None => perr(e.pos(), "expected an integer coefficient"),
    }
}

fn list<'e>(e: &'e SExpr, head: &str) -> Res<&'e [SExpr]> {
    match e.list() {
        Some([h, rest @ ..]) if h.atom() == Some(head) => Ok(rest),
        _ => perr(e.pos(), format!("expected ({head} ...)")),
    }
}

pub fn parse_lits(problem: &mut Problem, e: &SExpr) -> Res<Vec<Lit>> {
    list(e, "cl")?
        .iter()
        .map(|l| {
            let (inner, positive) = match l.list() {
                Some([h, inner]) if h.atom() == Some("neg") => (inner, false),
                _ => (l, true),
            };
            Ok(Lit::new(problem.parse_bool_term(inner)?, positive))
        })
        .collect()
}

fn parse_eq_step(problem: &mut Problem, e: &SExpr) -> Res<EqStep> {
    let pos = e.pos();
    let Some([head, args @ ..]) = e.list() else {
        return perr(pos, "expected an equality step");
    };
    let Some((sides, refs)) = args.len().checked_sub(2).map(|n| (&args[n..], &args[..n])) else {
        return perr(pos, "equality step needs both sides");
    };
    let rule = match (head.atom(), refs) {
        (Some("refl"), []) => EqRule::Refl,
        (Some("hyp"), [i]) => EqRule::Hyp(parse_index(i)?),
        (Some("sym"), [j]) => EqRule::Sym(parse_index(j)?),
        (Some("trans"), [i, j]) => EqRule::Trans(parse_index(i)?, parse_index(j)?),
        (Some("cong"), [f, SExpr::List(js, _)]) => {
            let Some(Symbol::Fun(fid)) = f.atom().and_then(|n| problem.symbols.get(n)).copied()
            else {
                return perr(f.pos(), "cong needs a declared function symbol");
            };
            EqRule::Cong(fid, js.iter().map(parse_index).collect::<Res<_>>()?)
        }
        _ => return perr(pos, "malformed equality step"),
    };
    let lhs = problem.parse_term(&sides[0])?;
    let rhs = problem.parse_term(&sides[1])?;
    Ok(EqStep { lhs, rhs, rule })
}

fn parse_pairs(items: &[SExpr]) -> Res<Vec<(usize, BigInt)>> {
    items
        .iter()
        .map(|e| match e.list() {
            Some([i, c]) => Ok((parse_index(i)?, parse_coeff(c)?)),
            _ => perr(e.pos(), "expected (index coefficient)"),
        })
        .collect()
}

fn parse_aux(problem: &mut Problem, e: &SExpr) -> Res<Vec<TermId>> {
    let Some(items) = e.list() else {
        return perr(e.pos(), "expected a list of bit names");
    };
    items
        .iter()
        .map(|b| match b.atom() {
            Some(name) => problem.bool_const(name, b.pos()),
            None => perr(b.pos(), "expected a bit name"),
        })
        .collect()
}

/// Parses the `{...}` payload of a step with rule `rule`.
pub fn parse_payload(problem: &mut Problem, rule: RuleKind, e: &SExpr) -> Res<Payload> {
    let SExpr::Braces(items, pos) = e else {
        return perr(e.pos(), "expected a `{...}` payload");
    };
    let pos = *pos;
    let bad = || perr(pos, format!("malformed payload for `{rule}`"));
    let payload = match rule {
        RuleKind::Res => match items.as_slice() {
            [] => Payload::None,
            _ => return bad(),
        },
        RuleKind::Cnf(kind) => match (items.as_slice(), kind.takes_index()) {
            ([t], false) => Payload::Cnf(CnfPayload {
                target: problem.parse_bool_term(t)?,
                index: 0,
            }),
            ([t, i], true) => Payload::Cnf(CnfPayload {
                target: problem.parse_bool_term(t)?,
                index: parse_index(i)?,
            }),
            _ => return bad(),
        },
        RuleKind::Euf => match items.as_slice() {
            [cl, SExpr::List(steps, _)] => {
                let lemma = parse_lits(problem, cl)?;
                let justification = steps
                    .iter()
                    .map(|s| parse_eq_step(problem, s))
                    .collect::<Res<_>>()?;
                Payload::Euf(EufPayload {
                    lemma,
                    justification,
                })
            }
            _ => return bad(),
        },
        RuleKind::Lia => {
            let (cl, cut, farkas) = match items.as_slice() {
                [cl, f] => (cl, None, f),
                [cl, c, f] => (cl, Some(c), f),
                _ => return bad(),
            };
            let lemma = parse_lits(problem, cl)?;
            let cut = cut.map(|c| parse_pairs(list(c, "cut")?)).transpose()?;
            let combination = list(farkas, "farkas")?
                .iter()
                .map(|e| match e.list() {
                    Some([h, c]) if h.atom() == Some("cut") => Ok((RowRef::Cut, parse_coeff(c)?)),
                    Some([i, c]) => Ok((RowRef::Hyp(parse_index(i)?), parse_coeff(c)?)),
                    _ => perr(e.pos(), "expected (index coefficient) or (cut coefficient)"),
                })
                .collect::<Res<_>>()?;
            Payload::Lia(LiaPayload {
                lemma,
                cut,
                combination,
            })
        }
        RuleKind::BbVar | RuleKind::BbAdd => match items.as_slice() {
            [t, aux] => {
                let target = problem.parse_term(t)?;
                let aux = parse_aux(problem, aux)?;
                Payload::Bv(BvPayload { target, aux })
            }
            _ => return bad(),
        },
        r if r.is_bitblast() => match items.as_slice() {
            [t] => Payload::Bv(BvPayload {
                target: problem.parse_term(t)?,
                aux: vec![],
            }),
            _ => return bad(),
        },
        RuleKind::Assume => match items.as_slice() {
            [cl] => Payload::Clause(parse_lits(problem, cl)?),
            _ => return bad(),
        },
        _ => return bad(),
    };
    Ok(payload)
}

/// Parses a certificate against `problem`, whose input clauses occupy the
/// first clause ids. Terms in payloads are interned into the problem's
/// store.
pub fn parse_certificate(bytes: &[u8], problem: &mut Problem) -> Res<Certificate> {
    let text = decode_utf8(bytes)?;
    let items = read_all(text)?;
    let mut cert = Certificate::default();
    let mut it = items.iter();
    while let Some(first) = it.next() {
        if cert.qed.is_some() {
            return perr(first.pos(), "nothing may follow `qed`");
        }
        if first.atom() == Some("qed") {
            let Some(id) = it.next() else {
                return perr(first.pos(), "`qed` needs a clause id");
            };
            cert.qed = Some(ClauseId(parse_step_id(id)?));
            continue;
        }
        let id = parse_step_id(first)?;
        let (Some(rule), Some(prem), Some(payload)) = (it.next(), it.next(), it.next()) else {
            return perr(
                first.pos(),
                "incomplete step, expected `<id> <rule> (<premises>) {<payload>}`",
            );
        };
        let rule = parse_rule(rule)?;
        let Some(prem_items) = prem.list() else {
            return perr(prem.pos(), "expected a premise list");
        };
        let mut premises = Vec::with_capacity(prem_items.len());
        for p in prem_items {
            let pid = parse_step_id(p)?;
            if pid >= id {
                let Pos { line, col } = p.pos();
                return Err(ReferenceError {
                    line,
                    col,
                    step: id,
                    premise: pid,
                }
                .into());
            }
            premises.push(ClauseId(pid));
        }
        let payload = parse_payload(problem, rule, payload)?;
        cert.steps.push(Step {
            id: ClauseId(id),
            rule,
            premises,
            payload,
        });
    }
    Ok(cert)
}

fn write_bigint(n: &BigInt, out: &mut String) {
    let _ = write!(out, "{n}");
}

pub fn write_payload(store: &TermStore, rule: RuleKind, payload: &Payload, out: &mut String) {
    out.push('{');
    match payload {
        Payload::None => {}
        Payload::Cnf(p) => {
            write_term(store, p.target, out);
            if matches!(rule, RuleKind::Cnf(k) if k.takes_index()) {
                let _ = write!(out, " {}", p.index);
            }
        }
        Payload::Euf(p) => {
            write_lits(store, &p.lemma, out);
            out.push_str(" (");
            for (k, s) in p.justification.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push('(');
                match &s.rule {
                    EqRule::Refl => out.push_str("refl"),
                    EqRule::Hyp(i) => {
                        let _ = write!(out, "hyp {i}");
                    }
                    EqRule::Sym(j) => {
                        let _ = write!(out, "sym {j}");
                    }
                    EqRule::Trans(i, j) => {
                        let _ = write!(out, "trans {i} {j}");
                    }
                    EqRule::Cong(f, js) => {
                        let _ = write!(out, "cong {} (", store.fun(*f).name);
                        for (n, j) in js.iter().enumerate() {
                            let _ = write!(out, "{}{j}", if n > 0 { " " } else { "" });
                        }
                        out.push(')');
                    }
                }
                out.push(' ');
                write_term(store, s.lhs, out);
                out.push(' ');
                write_term(store, s.rhs, out);
                out.push(')');
            }
            out.push(')');
        }
        Payload::Lia(p) => {
            write_lits(store, &p.lemma, out);
            if let Some(cut) = &p.cut {
                out.push_str(" (cut");
                for (i, c) in cut {
                    let _ = write!(out, " ({i} ");
                    write_bigint(c, out);
                    out.push(')');
                }
                out.push(')');
            }
            out.push_str(" (farkas");
            for (r, c) in &p.combination {
                match r {
                    RowRef::Hyp(i) => {
                        let _ = write!(out, " ({i} ");
                    }
                    RowRef::Cut => out.push_str(" (cut "),
                }
                write_bigint(c, out);
                out.push(')');
            }
            out.push(')');
        }
        Payload::Bv(p) => {
            write_term(store, p.target, out);
            if matches!(rule, RuleKind::BbVar | RuleKind::BbAdd) {
                out.push_str(" (");
                for (k, &a) in p.aux.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    write_term(store, a, out);
                }
                out.push(')');
            }
        }
        Payload::Clause(lits) => write_lits(store, lits, out),
    }
    out.push('}');
}

pub fn write_step(store: &TermStore, step: &Step, out: &mut String) {
    let _ = write!(out, "{} {} (", step.id, step.rule);
    for (k, p) in step.premises.iter().enumerate() {
        let _ = write!(out, "{}{p}", if k > 0 { " " } else { "" });
    }
    out.push_str(") ");
    write_payload(store, step.rule, &step.payload, out);
    out.push('\n');
}

pub fn print_certificate(store: &TermStore, cert: &Certificate) -> String {
    let mut out = String::new();
    for s in &cert.steps {
        write_step(store, s, &mut out);
    }
    if let Some(q) = cert.qed {
        let _ = writeln!(out, "qed {q}");
    }
    out
}
