//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p certkernel-cli --test acceptance`; pass criterion
//! numbers after `--` to run a subset.

mod criteria;
mod support;

use std::process::ExitCode;
use std::time::Instant;

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = (u32, &'static str, fn() -> Verdict);

const CRITERIA: [Criterion; 9] = [
    (1, "soundness over generated pairs", criteria::soundness),
    (2, "step-local soundness", criteria::step_local),
    (3, "cnf lemma tautologies", criteria::cnf_tautologies),
    (4, "bit-blasting agreement", criteria::bitblasting),
    (5, "lia lemmas and corruptions", criteria::lia),
    (6, "mutated certificate files", criteria::fuzz),
    (7, "linearizer and compaction", criteria::linearizer),
    (8, "end-to-end corpus", criteria::corpus),
    (9, "throughput", criteria::throughput),
];

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.first().map(String::as_str) == Some(criteria::THROUGHPUT_CHILD) {
        return criteria::throughput_child();
    }
    let wanted: Vec<u32> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let started = Instant::now();
    for (n, name, run) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {n} {name}: {} [{:.1} s]",
            v.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {failed} failed, total {:.1} s",
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
