use certkernel_oracle::Budget;

use crate::CliError;

/// Parses `CERTKERNEL_BUDGET`: comma-separated `assignments=N`, `box=N`,
/// `domain=N`, or a bare `N` for the number of assignments.
pub fn parse_budget(text: &str) -> Result<Budget, CliError> {
    let mut b = Budget::default();
    let bad = |msg: String| CliError::Budget(msg);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').unwrap_or(("assignments", part));
        let n: u64 = value
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{value}` is not a non-negative integer")))?;
        match key.trim() {
            "assignments" => b.max_assignments = n,
            "box" => b.int_box = n.min(1 << 40) as i128,
            "domain" if (1..=64).contains(&n) => b.max_domain = n as u32,
            "domain" => return Err(bad(format!("domain size {n} must be between 1 and 64"))),
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_budget("").unwrap(), Budget::default());
        assert_eq!(parse_budget("500").unwrap().max_assignments, 500);
        let b = parse_budget("box=3, domain=2,assignments=7").unwrap();
        assert_eq!((b.int_box, b.max_domain, b.max_assignments), (3, 2, 7));
        assert!(parse_budget("box=-1").is_err());
        assert!(parse_budget("depth=2").is_err());
        assert!(parse_budget("domain=0").is_err());
    }
}
