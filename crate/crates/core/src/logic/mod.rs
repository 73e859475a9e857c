//! Propositional core: variables, literals, 2-clauses and formulas.
//!
//! A literal is packed into a single `u32` code `2 * var + negated`, which is
//! also its vertex index in the implication graph.

mod dimacs;
mod graph;
mod solve;

pub use dimacs::{read_dimacs, write_dimacs, DimacsError};
pub use graph::{build_implication_graph, compute_sccs, ImplicationGraph, SccResult};
pub use solve::{
    brute_force_models, check_witness, count_models, count_models_with, decide, find_proof_cycle, ProofCycle,
    SatResult, WitnessReport, DEFAULT_VAR_LIMIT,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("literal over variable {var} out of range for a formula with {num_vars} variables")]
    VarOutOfRange { var: u32, num_vars: u32 },
    #[error("assignment is missing variables {0:?}")]
    MissingVariables(Vec<u32>),
    #[error("model counting supports at most {limit} variables, formula has {num_vars}")]
    Capacity { num_vars: u32, limit: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal over a [`Var`]. Ordering is by variable, positive before negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn complement(self) -> Self {
        Lit(self.0 ^ 1)
    }

    /// Vertex index in the implication graph.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        Lit(code as u32)
    }

    /// Signed 1-based integer, as used by DIMACS.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Inverse of [`Lit::to_dimacs`]; `None` for zero.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = u32::try_from(value.unsigned_abs() - 1).ok()?;
        Some(Lit::new(Var(var), value > 0))
    }

    pub fn eval(self, values: &[bool]) -> bool {
        values[self.var().index()] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        self.complement()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var())
        } else {
            write!(f, "¬{}", self.var())
        }
    }
}

/// A disjunction of two literals. Unit clauses are stored as `l ∨ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    pub first: Lit,
    pub second: Lit,
}

impl Clause {
    pub fn new(first: Lit, second: Lit) -> Self {
        Clause { first, second }
    }

    pub fn unit(lit: Lit) -> Self {
        Clause { first: lit, second: lit }
    }

    /// The clause `¬a ∨ b`, i.e. the implication `a → b`.
    pub fn implication(from: Lit, to: Lit) -> Self {
        Clause::new(!from, to)
    }

    pub fn is_unit(&self) -> bool {
        self.first == self.second
    }

    pub fn is_tautology(&self) -> bool {
        self.first == !self.second
    }

    pub fn lits(&self) -> [Lit; 2] {
        [self.first, self.second]
    }

    /// Literals sorted by (variable, polarity).
    pub fn canonical(&self) -> Clause {
        if self.second < self.first {
            Clause::new(self.second, self.first)
        } else {
            *self
        }
    }

    pub fn eval(&self, values: &[bool]) -> bool {
        self.first.eval(values) || self.second.eval(values)
    }

    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> Clause {
        let remap = |l: Lit, f: &mut dyn FnMut(Var) -> Var| Lit::new(f(l.var()), l.is_positive());
        Clause::new(remap(self.first, &mut f), remap(self.second, &mut f))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ∨ {})", self.first, self.second)
    }
}

/// A 2-CNF formula over variables `0..num_vars`. Clause order is kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, LogicError> {
        for c in &clauses {
            for l in c.lits() {
                if l.var().0 >= num_vars {
                    return Err(LogicError::VarOutOfRange { var: l.var().0, num_vars });
                }
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    pub fn empty(num_vars: u32) -> Self {
        Formula { num_vars, clauses: Vec::new() }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.num_vars).map(Var)
    }

    /// Variables that occur in at least one clause, ascending.
    pub fn occurring_vars(&self) -> Vec<Var> {
        let mut seen = vec![false; self.num_vars as usize];
        for c in &self.clauses {
            seen[c.first.var().index()] = true;
            seen[c.second.var().index()] = true;
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| Var(i as u32)).collect()
    }

    /// Signed-integer pairs in DIMACS convention (1-based, sign = polarity).
    pub fn to_signed_pairs(&self) -> Vec<[i64; 2]> {
        self.clauses.iter().map(|c| [c.first.to_dimacs(), c.second.to_dimacs()]).collect()
    }

    pub fn from_signed_pairs(num_vars: u32, pairs: &[[i64; 2]]) -> Result<Self, LogicError> {
        let mut clauses = Vec::with_capacity(pairs.len());
        for [a, b] in pairs {
            let lit = |v: i64| Lit::from_dimacs(v).ok_or(LogicError::VarOutOfRange { var: u32::MAX, num_vars });
            clauses.push(Clause::new(lit(*a)?, lit(*b)?));
        }
        Formula::new(num_vars, clauses)
    }
}

/// A total truth assignment, indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all(num_vars: u32, value: bool) -> Self {
        Assignment(vec![value; num_vars as usize])
    }

    /// Completes a partial map; every variable in `required` must be present,
    /// the remaining ones default to `false`.
    pub fn from_partial(partial: &BTreeMap<Var, bool>, num_vars: u32, required: &[Var]) -> Result<Self, LogicError> {
        let missing: Vec<u32> = required.iter().filter(|v| !partial.contains_key(v)).map(|v| v.0).collect();
        if !missing.is_empty() {
            return Err(LogicError::MissingVariables(missing));
        }
        let mut values = vec![false; num_vars as usize];
        for (v, &b) in partial {
            if let Some(slot) = values.get_mut(v.index()) {
                *slot = b;
            }
        }
        Ok(Assignment(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: Var) -> bool {
        self.0[var.index()]
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0[var.index()] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        lit.eval(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let v = Var(7);
        let p = v.positive();
        assert!(p.is_positive());
        assert_eq!(p.var(), v);
        assert_eq!(!!p, p);
        assert_eq!((!p).to_dimacs(), -8);
        assert_eq!(Lit::from_dimacs(-8), Some(!p));
        assert_eq!(Lit::from_dimacs(0), None);
    }

    #[test]
    fn canonical_orders_by_var_then_polarity() {
        let c = Clause::new(Var(3).negative(), Var(1).positive());
        assert_eq!(c.canonical(), Clause::new(Var(1).positive(), Var(3).negative()));
        let d = Clause::new(Var(2).negative(), Var(2).positive());
        assert_eq!(d.canonical().first, Var(2).positive());
        assert!(d.is_tautology());
    }

    #[test]
    fn formula_rejects_out_of_range() {
        let c = Clause::unit(Var(3).positive());
        assert_eq!(Formula::new(3, vec![c]), Err(LogicError::VarOutOfRange { var: 3, num_vars: 3 }));
    }

    #[test]
    fn partial_assignment_completion() {
        let mut m = BTreeMap::new();
        m.insert(Var(0), true);
        assert_eq!(Assignment::from_partial(&m, 3, &[Var(0), Var(2)]), Err(LogicError::MissingVariables(vec![2])));
        let a = Assignment::from_partial(&m, 3, &[Var(0)]).unwrap();
        assert_eq!(a.values(), &[true, false, false]);
    }
}
