//! Writes a certificate for a problem file.
//!
//! usage: certify <problem> [<hints>] [--bitblast]
//!
//! `hints` holds certificate lines (theory lemmas, assumptions) numbered
//! from the input count; the rest of the refutation is searched for.

use std::process::ExitCode;

use certkernel_frontend::{parse_certificate, parse_dimacs, parse_smt2, print_certificate};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let blast = args.iter().any(|a| a == "--bitblast");
    let files: Vec<&String> = args.iter().filter(|a| !a.starts_with("--")).collect();
    let Some(path) = files.first() else {
        eprintln!("usage: certify <problem> [<hints>] [--bitblast]");
        return ExitCode::from(2);
    };
    let run = || -> Result<String, String> {
        let bytes = std::fs::read(path).map_err(|e| format!("{path}: {e}"))?;
        let mut problem = if path.ends_with(".cnf") {
            parse_dimacs(&bytes).map_err(|e| format!("{path}: {e}"))?
        } else {
            parse_smt2(&bytes).map_err(|e| format!("{path}: {e}"))?
        };
        let hints = match files.get(1) {
            Some(h) => {
                let text = std::fs::read(h).map_err(|e| format!("{h}: {e}"))?;
                parse_certificate(&text, &mut problem)
                    .map_err(|e| format!("{h}: {e}"))?
                    .steps
            }
            None => Vec::new(),
        };
        let cert = certkernel_testkit::complete(&mut problem, &hints, blast)?;
        Ok(print_certificate(&problem.store, &cert))
    };
    match run() {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
