//! The `certkernel` command line: check certificates, translate nested
//! proofs, print statistics, or brute-force small problems.
//!
//! Exit codes: 0 valid, 1 invalid, 2 trusted (1 under `--strict-assumes`),
//! 3 parse or usage error.

mod budget;
mod record;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use certkernel_frontend::{
    clause_to_string, parse_certificate, parse_dimacs, parse_smt2, print_certificate,
    FrontendError, Problem, Symbol,
};
use certkernel_kernel::{check, CheckResult, ClauseId, RuleStats, Verdict};
use certkernel_oracle::{brute_unsat, Outcome};
use certkernel_preproc::{compact, linearize, parse_nested, LinearizeError};
use clap::{Parser, ValueEnum};
use thiserror::Error;

pub use budget::parse_budget;
pub use record::FIELDS as RECORD_FIELDS;

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TRUSTED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Check,
    Translate,
    Stats,
    Oracle,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Check => "check",
            Mode::Translate => "translate",
            Mode::Stats => "stats",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dimacs,
    Smt2,
}

#[derive(Debug, Parser)]
#[command(
    name = "certkernel",
    version,
    about = "Checks SAT/SMT refutation certificates",
    after_help = "Exit codes: 0 valid, 1 invalid, 2 trusted (1 with --strict-assumes), 3 parse or usage error.\n\
                  In oracle mode: 0 unsatisfiable, 1 satisfiable, 2 budget exhausted.\n\
                  CERTKERNEL_BUDGET bounds the oracle, e.g. `assignments=1000000,box=10,domain=3`."
)]
pub struct Args {
    /// Problem file, DIMACS or SMT-LIB 2; `-` reads stdin. Repeat together
    /// with --proof to process several pairs.
    #[arg(long, required = true, value_name = "PATH")]
    pub problem: Vec<String>,
    /// Certificate file (a nested proof in translate mode); `-` reads stdin.
    #[arg(long, value_name = "PATH")]
    pub proof: Vec<String>,
    /// Problem format; inferred from the file when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value_t = Mode::Check)]
    pub mode: Mode,
    /// Treat `assume` steps as failures.
    #[arg(long)]
    pub strict_assumes: bool,
    /// Number of pairs processed in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Print one tab-separated key=value record per run.
    #[arg(long)]
    pub machine: bool,
    /// In translate mode, keep only the steps the refutation needs.
    #[arg(long)]
    pub compact: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Frontend { path: String, source: FrontendError },
    #[error("{path}: {source}")]
    Linearize {
        path: String,
        source: LinearizeError,
    },
    #[error("CERTKERNEL_BUDGET: {0}")]
    Budget(String),
    #[error("{0}")]
    Usage(String),
}

/// Reads a problem, choosing the format from the flag, the file extension or
/// the first meaningful line.
pub fn load_problem(
    bytes: &[u8],
    format: Option<Format>,
    path: &str,
) -> Result<Problem, FrontendError> {
    let format = format.unwrap_or_else(|| {
        let ext = Path::new(path)
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("");
        if ext == "cnf" || ext == "dimacs" {
            return Format::Dimacs;
        }
        let text = String::from_utf8_lossy(&bytes[..bytes.len().min(4096)]);
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('c'));
        match first {
            Some(l) if l.starts_with("p ") || l.starts_with("p\t") => Format::Dimacs,
            _ => Format::Smt2,
        }
    });
    match format {
        Format::Dimacs => Ok(parse_dimacs(bytes)?),
        Format::Smt2 => parse_smt2(bytes),
    }
}

/// Parses and checks one certificate. A premise that does not name an
/// earlier clause makes the run invalid at that step rather than a parse
/// error.
pub fn check_bytes(problem: &mut Problem, proof: &[u8]) -> Result<CheckResult, FrontendError> {
    match parse_certificate(proof, problem) {
        Ok(cert) => Ok(check(&mut problem.store, &problem.inputs, &cert)),
        Err(FrontendError::Reference(e)) => Ok(CheckResult {
            verdict: Verdict::Invalid {
                reason: format!("premise {} is not an earlier clause", e.premise),
                step: Some(ClauseId(e.step)),
            },
            stats: RuleStats::default(),
            empty_at: None,
            first_rejection: None,
        }),
        Err(e) => Err(e),
    }
}

pub fn exit_code(verdict: &Verdict, strict_assumes: bool) -> i32 {
    match verdict {
        Verdict::Valid => EXIT_VALID,
        Verdict::Trusted { .. } if strict_assumes => EXIT_INVALID,
        Verdict::Trusted { .. } => EXIT_TRUSTED,
        Verdict::Invalid { .. } => EXIT_INVALID,
    }
}

/// The most severe of several exit codes.
fn combine(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes
        .into_iter()
        .max_by_key(|&c| match c {
            EXIT_VALID => 0,
            EXIT_TRUSTED => 1,
            EXIT_INVALID => 2,
            _ => 3,
        })
        .unwrap_or(EXIT_VALID)
}

struct Input {
    name: String,
    bytes: Vec<u8>,
}

#[derive(Default)]
struct Report {
    out: String,
    err: String,
    code: i32,
}

fn read_input(path: &str, stdin: &mut Option<Vec<u8>>) -> Result<Input, CliError> {
    let bytes = if path == "-" {
        stdin
            .take()
            .ok_or_else(|| CliError::Usage("stdin (`-`) can be used for only one input".into()))?
    } else {
        std::fs::read(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?
    };
    Ok(Input {
        name: path.into(),
        bytes,
    })
}

fn verdict_text(problem: &Problem, r: &CheckResult, strict: bool) -> String {
    let mut out = String::new();
    match &r.verdict {
        Verdict::Valid => out.push_str("VALID\n"),
        Verdict::Trusted { assumptions } => {
            let note = if strict {
                ", rejected by --strict-assumes"
            } else {
                ""
            };
            let _ = writeln!(out, "TRUSTED ({} assumption(s){note})", assumptions.len());
            for (id, c) in assumptions {
                let _ = writeln!(
                    out,
                    "  assumed at step {id}: {}",
                    clause_to_string(&problem.store, c)
                );
            }
        }
        Verdict::Invalid {
            reason,
            step: Some(s),
        } => {
            let _ = writeln!(out, "INVALID at step {s}: {reason}");
        }
        Verdict::Invalid { reason, step: None } => {
            let _ = writeln!(out, "INVALID: {reason}");
        }
    }
    out
}

fn stats_text(r: &CheckResult) -> String {
    let s = &r.stats;
    let mut out = String::new();
    let _ = writeln!(out, "inputs: {}", s.inputs);
    let _ = writeln!(out, "steps: {}", s.steps);
    let _ = writeln!(out, "rejected steps: {}", s.rejected);
    let _ = writeln!(out, "clause store: {}", s.clause_store);
    let _ = writeln!(out, "max clause width: {}", s.max_clause_width);
    if let Some(id) = r.empty_at {
        let _ = writeln!(out, "empty clause at: {id}");
    }
    out.push_str("per rule:\n");
    for (rule, n) in &s.per_rule {
        let _ = writeln!(out, "  {rule}: {n}");
    }
    out
}

fn fail(args: &Args, rec: &record::Record<'_>, e: &CliError) -> Report {
    let mut rep = Report {
        code: EXIT_ERROR,
        ..Report::default()
    };
    let _ = writeln!(rep.err, "error: {e}");
    if args.machine {
        rep.out = rec.outcome("ERROR", &e.to_string());
    }
    rep
}

fn run_pair(args: &Args, problem: &Input, proof: Option<&Input>, budget: Option<&str>) -> Report {
    let proof_name = proof.map_or("", |p| p.name.as_str());
    let mut rec = record::Record {
        problem: &problem.name,
        proof: proof_name,
        mode: args.mode.name(),
        exit: EXIT_ERROR,
    };
    let mut p = match load_problem(&problem.bytes, args.format, &problem.name) {
        Ok(p) => p,
        Err(source) => {
            return fail(
                args,
                &rec,
                &CliError::Frontend {
                    path: problem.name.clone(),
                    source,
                },
            )
        }
    };
    match (args.mode, proof) {
        (Mode::Check | Mode::Stats, Some(proof)) => {
            let r = match check_bytes(&mut p, &proof.bytes) {
                Ok(r) => r,
                Err(source) => {
                    return fail(
                        args,
                        &rec,
                        &CliError::Frontend {
                            path: proof.name.clone(),
                            source,
                        },
                    )
                }
            };
            rec.exit = exit_code(&r.verdict, args.strict_assumes);
            let out = if args.machine {
                rec.result(&r, r.verdict.label())
            } else if args.mode == Mode::Stats {
                verdict_text(&p, &r, args.strict_assumes) + &stats_text(&r)
            } else {
                verdict_text(&p, &r, args.strict_assumes)
            };
            Report {
                out,
                err: String::new(),
                code: rec.exit,
            }
        }
        (Mode::Translate, Some(proof)) => {
            let np = match parse_nested(&proof.bytes, &mut p) {
                Ok(np) => np,
                Err(source) => {
                    return fail(
                        args,
                        &rec,
                        &CliError::Frontend {
                            path: proof.name.clone(),
                            source,
                        },
                    )
                }
            };
            let mut cert = match linearize(&np, p.inputs.len()) {
                Ok(c) => c,
                Err(source) => {
                    return fail(
                        args,
                        &rec,
                        &CliError::Linearize {
                            path: proof.name.clone(),
                            source,
                        },
                    )
                }
            };
            if args.compact {
                cert = compact(&mut p.store, &p.inputs, &cert);
            }
            Report {
                out: print_certificate(&p.store, &cert),
                err: String::new(),
                code: EXIT_VALID,
            }
        }
        (Mode::Oracle, _) => {
            let budget = match parse_budget(budget.unwrap_or("")) {
                Ok(b) => b,
                Err(e) => return fail(args, &rec, &e),
            };
            let (label, code, model) = match brute_unsat(&p.store, &p.inputs, budget) {
                Outcome::Unsat => ("UNSAT", 0, None),
                Outcome::Sat(m) => ("SAT", 1, Some(m)),
                Outcome::Exhausted => ("UNKNOWN", 2, None),
            };
            rec.exit = code;
            let mut out = String::new();
            if args.machine {
                out = rec.outcome(label, "");
            } else {
                out.push_str(label);
                if label == "UNKNOWN" {
                    out.push_str(" (budget exhausted)");
                }
                out.push('\n');
                if let Some(m) = model {
                    let mut names: Vec<(&String, &Symbol)> = p.symbols.iter().collect();
                    names.sort_by(|a, b| a.0.cmp(b.0));
                    for (name, sym) in names {
                        if let Symbol::Const(t) = sym {
                            if let Some(v) = m.vars.get(t) {
                                let _ = writeln!(out, "  {name} = {v}");
                            }
                        }
                    }
                }
            }
            Report {
                out,
                err: String::new(),
                code,
            }
        }
        (_, None) => fail(
            args,
            &rec,
            &CliError::Usage(format!("--mode {} needs --proof", args.mode.name())),
        ),
    }
}

/// Runs the command line on `argv` (including the program name).
/// `budget` is the value of `CERTKERNEL_BUDGET`.
pub fn run(
    argv: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    budget: Option<&str>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_VALID
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    let needs_proof = args.mode != Mode::Oracle;
    if needs_proof && args.proof.len() != args.problem.len() {
        let _ = writeln!(
            stderr,
            "error: give one --proof per --problem ({} vs {})",
            args.proof.len(),
            args.problem.len()
        );
        return EXIT_ERROR;
    }
    let dashes = args
        .problem
        .iter()
        .chain(&args.proof)
        .filter(|p| *p == "-")
        .count();
    let mut stdin_bytes = None;
    if dashes > 1 {
        let _ = writeln!(stderr, "error: stdin (`-`) can be used for only one input");
        return EXIT_ERROR;
    } else if dashes == 1 {
        let mut buf = Vec::new();
        if let Err(e) = stdin.read_to_end(&mut buf) {
            let _ = writeln!(stderr, "error: reading stdin: {e}");
            return EXIT_ERROR;
        }
        stdin_bytes = Some(buf);
    }
    let mut pairs = Vec::new();
    for (i, path) in args.problem.iter().enumerate() {
        let problem = read_input(path, &mut stdin_bytes);
        let proof = args
            .proof
            .get(i)
            .filter(|_| needs_proof)
            .map(|q| read_input(q, &mut stdin_bytes))
            .transpose();
        match (problem, proof) {
            (Ok(p), Ok(q)) => pairs.push((p, q)),
            (Err(e), _) | (_, Err(e)) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_ERROR;
            }
        }
    }
    let work = |pairs: &[(Input, Option<Input>)]| -> Vec<Report> {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|(p, q)| run_pair(&args, p, q.as_ref(), budget))
            .collect()
    };
    let reports = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()
    {
        Ok(pool) => pool.install(|| work(&pairs)),
        Err(_) => pairs
            .iter()
            .map(|(p, q)| run_pair(&args, p, q.as_ref(), budget))
            .collect(),
    };
    let several = reports.len() > 1 && !args.machine && args.mode != Mode::Translate;
    for (rep, (p, q)) in reports.iter().zip(&pairs) {
        if several {
            let name = q.as_ref().map_or(p.name.as_str(), |q| q.name.as_str());
            let _ = writeln!(stdout, "== {name}");
        }
        let _ = stdout.write_all(rep.out.as_bytes());
        let _ = stderr.write_all(rep.err.as_bytes());
    }
    let _ = stdout.flush();
    combine(reports.iter().map(|r| r.code))
}
