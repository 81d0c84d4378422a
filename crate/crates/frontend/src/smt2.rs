use certkernel_core::{Clause, Lit};

use crate::error::{FrontendError, ParseError, UnsupportedError};
use crate::problem::{Logic, Problem};
use crate::sexpr::{decode_utf8, read_all, Pos, SExpr};

type Res<T> = Result<T, FrontendError>;

fn perr<T>(pos: Pos, msg: impl Into<String>) -> Res<T> {
    Err(ParseError::at(pos, msg).into())
}

/// Parses the supported SMT-LIB 2 subset. Each assertion becomes a unit input
/// clause.
pub fn parse_smt2(bytes: &[u8]) -> Res<Problem> {
    let text = decode_utf8(bytes)?;
    let mut problem: Option<Problem> = None;
    for cmd in read_all(text)? {
        let pos = cmd.pos();
        let Some(items) = cmd.list() else {
            return perr(pos, "expected a command");
        };
        let Some(name) = cmd.head() else {
            return perr(pos, "expected a command name");
        };
        let args = &items[1..];
        if name == "set-logic" {
            let logic = match args {
                [l] if l.atom().is_some() => l.atom().unwrap_or_default(),
                _ => return perr(pos, "set-logic takes one symbol"),
            };
            if problem.is_some() {
                return perr(pos, "logic already set");
            }
            let Some(logic) = Logic::from_name(logic).filter(|l| *l != Logic::Sat) else {
                return Err(UnsupportedError::at(args[0].pos(), format!("logic {logic}")).into());
            };
            problem = Some(Problem::new(logic));
            continue;
        }
        match name {
            "set-info" | "set-option" => continue,
            "exit" => break,
            _ => {}
        }
        let Some(p) = problem.as_mut() else {
            return perr(pos, format!("`{name}` before set-logic"));
        };
        match (name, args) {
            ("declare-sort", [s, arity]) => {
                let Some(s) = s.atom() else {
                    return perr(pos, "expected a sort name");
                };
                if arity.atom() != Some("0") {
                    return Err(UnsupportedError::at(arity.pos(), "parametric sort").into());
                }
                p.declare_sort(s, pos)?;
            }
            ("declare-fun", [f, SExpr::List(arg_sorts, _), ret]) => {
                let Some(f) = f.atom() else {
                    return perr(pos, "expected a function name");
                };
                let arg_sorts = arg_sorts
                    .iter()
                    .map(|s| p.parse_sort(s))
                    .collect::<Res<Vec<_>>>()?;
                let ret = p.parse_sort(ret)?;
                p.declare(f, arg_sorts, ret, pos)?;
            }
            ("declare-const", [c, sort]) => {
                let Some(c) = c.atom() else {
                    return perr(pos, "expected a constant name");
                };
                let sort = p.parse_sort(sort)?;
                p.declare(c, vec![], sort, pos)?;
            }
            ("assert", [t]) => {
                let t = p.parse_bool_term(t)?;
                p.assertions.push(t);
                p.inputs.push(Clause::from_lits([Lit::pos(t)]));
            }
            ("check-sat", []) => {}
            ("declare-sort" | "declare-fun" | "declare-const" | "assert" | "check-sat", _) => {
                return perr(pos, format!("malformed `{name}`"));
            }
            _ => return Err(UnsupportedError::at(pos, format!("command `{name}`")).into()),
        }
    }
    problem.ok_or_else(|| {
        ParseError {
            line: 1,
            col: 1,
            message: "missing set-logic".into(),
        }
        .into()
    })
}
