//! DIMACS CNF reading and writing, restricted to clauses of width ≤ 2.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, Formula, Lit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing or malformed `p cnf` header")]
    Header,
    #[error("line {line}: invalid literal `{token}`")]
    Literal { line: usize, token: String },
    #[error("line {line}: clause has {width} literals, only 1 or 2 supported")]
    Width { line: usize, width: usize },
    #[error("literal {lit} exceeds declared variable count {num_vars}")]
    Range { lit: i64, num_vars: u32 },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("unterminated clause at end of input")]
    Unterminated,
}

/// Unit clauses are written with a single literal.
pub fn write_dimacs(f: &Formula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        if c.is_unit() {
            let _ = writeln!(out, "{} 0", c.first.to_dimacs());
        } else {
            let _ = writeln!(out, "{} {} 0", c.first.to_dimacs(), c.second.to_dimacs());
        }
    }
    out
}

/// Parses DIMACS text; single-literal clauses come back as `l ∨ l`.
pub fn read_dimacs(text: &str) -> Result<Formula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n.parse().map_err(|_| DimacsError::Header)?;
                    let m = m.parse().map_err(|_| DimacsError::Header)?;
                    header = Some((n, m));
                }
                _ => return Err(DimacsError::Header),
            }
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::Header)?;
        for token in line.split_whitespace() {
            let value: i64 =
                token.parse().map_err(|_| DimacsError::Literal { line: line_no, token: token.to_string() })?;
            if value == 0 {
                let clause = match pending.as_slice() {
                    [a] => Clause::unit(*a),
                    [a, b] => Clause::new(*a, *b),
                    other => {
                        let line = if other.is_empty() { line_no } else { pending_line };
                        return Err(DimacsError::Width { line, width: other.len() });
                    }
                };
                clauses.push(clause);
                pending.clear();
                continue;
            }
            if value.unsigned_abs() > u64::from(num_vars) {
                return Err(DimacsError::Range { lit: value, num_vars });
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push(Lit::from_dimacs(value).expect("nonzero literal"));
            if pending.len() > 2 {
                return Err(DimacsError::Width { line: pending_line, width: pending.len() });
            }
        }
    }
    if !pending.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    let (num_vars, declared) = header.ok_or(DimacsError::Header)?;
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    Ok(Formula::new(num_vars, clauses).expect("literals range-checked"))
}
