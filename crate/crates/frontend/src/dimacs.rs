use std::fmt::Write as _;

use certkernel_core::{Clause, Lit, Sort};

use crate::error::ParseError;
use crate::problem::{Logic, Problem};
use crate::sexpr::{decode_utf8, Pos};

/// A DIMACS CNF file as written: clauses keep their literal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

pub fn parse_dimacs_raw(bytes: &[u8]) -> Result<Dimacs, ParseError> {
    let text = decode_utf8(bytes)?;
    let mut header: Option<(u32, usize, Pos)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut open_at: Option<Pos> = None;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln as u32 + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('c') || trimmed.is_empty() {
            continue;
        }
        let col_of = |tok: &str| (tok.as_ptr() as usize - line.as_ptr() as usize) as u32 + 1;
        if trimmed.starts_with('p') {
            let pos = Pos {
                line: line_no,
                col: col_of(trimmed),
            };
            if header.is_some() {
                return Err(ParseError::at(pos, "duplicate problem line"));
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                ["p", "cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let Some((v, c)) = parsed.filter(|&(v, _)| v < i32::MAX as u32) else {
                return Err(ParseError::at(
                    pos,
                    "malformed header, expected `p cnf <vars> <clauses>`",
                ));
            };
            header = Some((v, c, pos));
            continue;
        }
        for tok in trimmed.split_whitespace() {
            let pos = Pos {
                line: line_no,
                col: col_of(tok),
            };
            let Some((num_vars, _, _)) = header else {
                return Err(ParseError::at(pos, "clause before the `p cnf` header"));
            };
            let Ok(lit) = tok.parse::<i64>() else {
                return Err(ParseError::at(
                    pos,
                    format!("expected an integer literal, found `{tok}`"),
                ));
            };
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                open_at = None;
            } else if lit.unsigned_abs() > num_vars as u64 {
                return Err(ParseError::at(
                    pos,
                    format!("literal {lit} out of range 1..={num_vars}"),
                ));
            } else {
                open_at.get_or_insert(pos);
                current.push(lit as i32);
            }
        }
    }
    let Some((num_vars, count, hpos)) = header else {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "missing `p cnf` header".into(),
        });
    };
    if let Some(pos) = open_at {
        return Err(ParseError::at(pos, "clause is missing its terminating 0"));
    }
    if clauses.len() != count {
        return Err(ParseError::at(
            hpos,
            format!(
                "header declares {count} clauses but {} were given",
                clauses.len()
            ),
        ));
    }
    Ok(Dimacs { num_vars, clauses })
}

pub fn print_dimacs(d: &Dimacs) -> String {
    let mut out = format!("p cnf {} {}\n", d.num_vars, d.clauses.len());
    for c in &d.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

impl Dimacs {
    /// Variables become Bool constants `x1..xV`; clauses are the inputs.
    pub fn to_problem(&self) -> Problem {
        let mut p = Problem::new(Logic::Sat);
        let vars: Vec<_> = (1..=self.num_vars)
            .map(
                |i| match p.declare(&format!("x{i}"), vec![], Sort::Bool, Pos::default()) {
                    Ok(crate::Symbol::Const(t)) => t,
                    _ => unreachable!("fresh Bool constants"),
                },
            )
            .collect();
        p.inputs = self
            .clauses
            .iter()
            .map(|c| {
                Clause::from_lits(
                    c.iter()
                        .map(|&l| Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0)),
                )
            })
            .collect();
        p
    }
}

pub fn parse_dimacs(bytes: &[u8]) -> Result<Problem, ParseError> {
    Ok(parse_dimacs_raw(bytes)?.to_problem())
}
