#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use sat2probe::logic::{build_implication_graph, ProofCycle};
use sat2probe::{Clause, Formula, Lit, Var};

pub fn formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (0..n, any::<bool>()).prop_map(|(v, p)| Lit::new(Var(v), p));
        prop::collection::vec((lit.clone(), lit), 0..=max_clauses).prop_map(move |pairs| {
            Formula::new(n, pairs.into_iter().map(|(a, b)| Clause::new(a, b)).collect()).unwrap()
        })
    })
}

pub fn random_formula(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> Formula {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(0..=max_clauses);
    let lit = |rng: &mut _| Lit::new(Var(Rng::random_range(rng, 0..n)), Rng::random_bool(rng, 0.5));
    let clauses = (0..m).map(|_| Clause::new(lit(rng), lit(rng))).collect();
    Formula::new(n, clauses).unwrap()
}

/// Closed walk through some `l` and `¬l` along implication edges.
pub fn is_proof_cycle(f: &Formula, cycle: &ProofCycle) -> bool {
    let g = build_implication_graph(f);
    let lits = &cycle.literals;
    let pivot = cycle.pivot();
    lits.len() >= 3
        && lits.first() == lits.last()
        && lits.contains(&!pivot)
        && lits.windows(2).all(|w| g.has_edge(w[0], w[1]))
}
