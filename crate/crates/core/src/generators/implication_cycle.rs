use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{param_error, GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams, Truth};
use crate::logic::{Clause, Formula, Lit, Var};
use crate::perturb::planted_filler;
use crate::rng::rng_from_seed;

/// UNSAT family built around a single contradiction cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationCycleParams {
    pub num_vars: u32,
    /// Number of literals `L` on the cycle.
    pub cycle_len: u32,
    /// Position `k` of the twist back to `¬ℓ₁`, `1 ≤ k ≤ L`.
    pub twist: u32,
    pub fillers: u32,
    pub shuffle: bool,
}

/// Core clauses for the literal sequence `lits = (ℓ₁..ℓ_L)` and twist `k`:
/// the chains `ℓ₁ → … → ℓ_k → ¬ℓ₁` and `¬ℓ₁ → ℓ_{k+1} → … → ℓ_L → ℓ₁`,
/// one clause per implication, `L + 1` in total.
pub fn implication_cycle_core(lits: &[Lit], twist: usize) -> Vec<Clause> {
    assert!(!lits.is_empty() && (1..=lits.len()).contains(&twist));
    let head = lits[0];
    let forward = lits[..twist].iter().copied().chain([!head]);
    let backward = [!head].into_iter().chain(lits[twist..].iter().copied()).chain([head]);
    let mut clauses = Vec::with_capacity(lits.len() + 1);
    for chain in [forward.collect::<Vec<_>>(), backward.collect::<Vec<_>>()] {
        clauses.extend(chain.windows(2).map(|w| Clause::implication(w[0], w[1])));
    }
    clauses
}

pub fn gen_implication_cycle(p: &ImplicationCycleParams, seed: u64) -> Result<GeneratedInstance, GenError> {
    let kind = GeneratorKind::ImplicationCycle;
    if p.cycle_len < 2 {
        return Err(param_error(kind, format!("cycle length {} < 2", p.cycle_len)));
    }
    if p.num_vars < p.cycle_len {
        return Err(param_error(
            kind,
            format!("{} variables cannot host a cycle of length {}", p.num_vars, p.cycle_len),
        ));
    }
    if !(1..=p.cycle_len).contains(&p.twist) {
        return Err(param_error(kind, format!("twist {} outside 1..={}", p.twist, p.cycle_len)));
    }
    let spare = p.num_vars - p.cycle_len;
    if p.fillers > 0 && spare == 0 {
        return Err(param_error(kind, "fillers requested but no variables outside the cycle"));
    }

    let mut rng = rng_from_seed(seed);
    let picked = index::sample(&mut rng, p.num_vars as usize, p.num_vars as usize);
    let order: Vec<Var> = picked.iter().map(|i| Var(i as u32)).collect();
    let (core_vars, filler_vars) = order.split_at(p.cycle_len as usize);
    let lits: Vec<Lit> = core_vars.iter().map(|&v| Lit::new(v, rng.random_bool(0.5))).collect();
    let mut clauses = implication_cycle_core(&lits, p.twist as usize);

    let hidden: Vec<bool> = (0..p.num_vars).map(|_| rng.random_bool(0.5)).collect();
    for _ in 0..p.fillers {
        clauses.push(planted_filler(&mut rng, filler_vars, |v| hidden[v.index()]));
    }
    if p.shuffle {
        clauses.shuffle(&mut rng);
    }

    Ok(GeneratedInstance {
        formula: Formula::new(p.num_vars, clauses).expect("variables sampled in range"),
        generator: kind,
        params: StructuralParams::ImplicationCycle(p.clone()),
        knobs: Default::default(),
        seed,
        ground_truth: Truth::Unsat,
        planted: Some(Planted::Conflict { var: lits[0].var() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{count_models, decide, SatResult};

    fn params(n: u32, l: u32, k: u32, r: u32) -> ImplicationCycleParams {
        ImplicationCycleParams { num_vars: n, cycle_len: l, twist: k, fillers: r, shuffle: false }
    }

    #[test]
    fn appendix_core_for_fixed_literals() {
        let v = |i: u32| Var(i - 1);
        let lits = [v(1).positive(), v(2).negative(), v(3).positive(), v(4).positive(), v(5).negative()];
        let got = implication_cycle_core(&lits, 3);
        let c = |a: Lit, b: Lit| Clause::new(a, b);
        let expected = vec![
            c(v(1).negative(), v(2).negative()),
            c(v(2).positive(), v(3).positive()),
            c(v(3).negative(), v(1).negative()),
            c(v(1).positive(), v(4).positive()),
            c(v(4).negative(), v(5).negative()),
            c(v(5).positive(), v(1).positive()),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn extreme_twists() {
        let lits = [Var(0).positive(), Var(1).positive(), Var(2).positive()];
        // k = L: backward chain collapses into the unit ¬ℓ₁ → ℓ₁
        let last = implication_cycle_core(&lits, 3);
        assert_eq!(last.len(), 4);
        assert_eq!(last[3], Clause::unit(lits[0]));
        let first = implication_cycle_core(&lits, 1);
        assert_eq!(first[0], Clause::unit(!lits[0]));
    }

    #[test]
    fn smallest_cycle_is_unsat() {
        let inst = gen_implication_cycle(&params(2, 2, 1, 0), 9).unwrap();
        assert_eq!(inst.formula.num_clauses(), 3);
        assert_eq!(count_models(&inst.formula, 20), Ok(0));
    }

    #[test]
    fn fillers_only_touch_spare_variables() {
        let inst = gen_implication_cycle(&params(12, 5, 3, 10), 4).unwrap();
        assert_eq!(inst.formula.num_clauses(), 16);
        assert!(matches!(decide(&inst.formula), SatResult::Unsat(_)));
        let core: std::collections::BTreeSet<Var> =
            inst.formula.clauses()[..6].iter().flat_map(|c| [c.first.var(), c.second.var()]).collect();
        let fillers = Formula::new(12, inst.formula.clauses()[6..].to_vec()).unwrap();
        for c in fillers.clauses() {
            assert!(!core.contains(&c.first.var()) && !core.contains(&c.second.var()));
        }
        assert!(decide(&fillers).is_sat());
    }

    #[test]
    fn parameter_errors() {
        assert!(gen_implication_cycle(&params(4, 5, 3, 0), 0).is_err());
        assert!(gen_implication_cycle(&params(5, 5, 6, 0), 0).is_err());
        assert!(gen_implication_cycle(&params(5, 5, 0, 0), 0).is_err());
        assert!(gen_implication_cycle(&params(5, 5, 3, 1), 0).is_err());
    }
}
