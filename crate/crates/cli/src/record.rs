//! One tab-separated `key=value` line per run, fields in a fixed order.

use std::fmt::Write as _;

use certkernel_kernel::{CheckResult, Verdict};

pub const FIELDS: [&str; 13] = [
    "problem",
    "proof",
    "mode",
    "verdict",
    "exit",
    "steps",
    "rejected",
    "clauses",
    "max_width",
    "rules",
    "assumptions",
    "step",
    "reason",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    if out.is_empty() {
        out.push('-');
    }
    out
}

pub struct Record<'a> {
    pub problem: &'a str,
    pub proof: &'a str,
    pub mode: &'a str,
    pub exit: i32,
}

impl Record<'_> {
    fn line(&self, values: [String; 9]) -> String {
        let mut all = vec![escape(self.problem), escape(self.proof), escape(self.mode)];
        all.insert(3, values[0].clone());
        all.push(self.exit.to_string());
        all.extend(values[1..].iter().cloned());
        let mut out = String::new();
        for (i, (k, v)) in FIELDS.iter().zip(all).enumerate() {
            if i > 0 {
                out.push('\t');
            }
            let _ = write!(out, "{k}={v}");
        }
        out.push('\n');
        out
    }

    pub fn result(&self, r: &CheckResult, verdict: &str) -> String {
        let rules = r
            .stats
            .per_rule
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect::<Vec<_>>()
            .join(",");
        let (assumptions, step, reason) = match &r.verdict {
            Verdict::Valid => (String::new(), String::new(), String::new()),
            Verdict::Trusted { assumptions } => (
                assumptions
                    .iter()
                    .map(|(id, _)| id.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                String::new(),
                String::new(),
            ),
            Verdict::Invalid { reason, step } => (
                String::new(),
                step.map(|s| s.to_string()).unwrap_or_default(),
                reason.clone(),
            ),
        };
        let s = &r.stats;
        self.line([
            verdict.to_string(),
            s.steps.to_string(),
            s.rejected.to_string(),
            s.clause_store.to_string(),
            s.max_clause_width.to_string(),
            escape(&rules),
            escape(&assumptions),
            escape(&step),
            escape(&reason),
        ])
    }

    /// A run that ended before a verdict, e.g. on a parse error.
    pub fn outcome(&self, verdict: &str, reason: &str) -> String {
        let dash = || "-".to_string();
        self.line([
            verdict.to_string(),
            dash(),
            dash(),
            dash(),
            dash(),
            dash(),
            dash(),
            dash(),
            escape(reason),
        ])
    }
}
