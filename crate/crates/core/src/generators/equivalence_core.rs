use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{param_error, GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams, Truth};
use crate::logic::{Assignment, Clause, Formula, Lit, Var};
use crate::rng::rng_from_seed;

/// Where the definition pairs go in the clause list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Construction order: pairs by ascending bound variable.
    #[default]
    Early,
    /// Pairs in reverse construction order.
    Late,
    Shuffled,
}

/// SAT family: `f` free variables, every other variable bound to a literal
/// of a free parent by an equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCoreParams {
    pub num_vars: u32,
    pub free: u32,
    #[serde(default)]
    pub placement: Placement,
}

/// `y ↔ τ(y)` with `τ(y) = p` or `¬p`, as the two clauses
/// `(¬y ∨ τ)`, `(¬τ ∨ y)`.
fn definition(bound: Var, parent: Var, same_sign: bool) -> [Clause; 2] {
    let tau = Lit::new(parent, same_sign);
    [Clause::new(bound.negative(), tau), Clause::new(!tau, bound.positive())]
}

pub fn gen_equivalence_core(p: &EquivalenceCoreParams, seed: u64) -> Result<GeneratedInstance, GenError> {
    let kind = GeneratorKind::EquivalenceCore;
    if p.free > p.num_vars {
        return Err(param_error(kind, format!("free count {} > {} variables", p.free, p.num_vars)));
    }
    if p.free == 0 && p.num_vars > 0 {
        return Err(param_error(kind, "bound variables need at least one free parent"));
    }
    let mut rng = rng_from_seed(seed);
    let mut is_free = vec![false; p.num_vars as usize];
    let free: Vec<Var> =
        index::sample(&mut rng, p.num_vars as usize, p.free as usize).iter().map(|i| Var(i as u32)).collect();
    for v in &free {
        is_free[v.index()] = true;
    }

    let mut values = Assignment::all(p.num_vars, false);
    for &v in &free {
        values.set(v, rng.random_bool(0.5));
    }

    let mut pairs: Vec<[Clause; 2]> = Vec::new();
    for y in (0..p.num_vars).map(Var).filter(|v| !is_free[v.index()]) {
        let parent = free[rng.random_range(0..free.len())];
        let same_sign = rng.random_bool(0.5);
        values.set(y, values.get(parent) == same_sign);
        pairs.push(definition(y, parent, same_sign));
    }

    let clauses: Vec<Clause> = match p.placement {
        Placement::Early => pairs.into_iter().flatten().collect(),
        Placement::Late => pairs.into_iter().rev().flatten().collect(),
        Placement::Shuffled => {
            let mut c: Vec<Clause> = pairs.into_iter().flatten().collect();
            c.shuffle(&mut rng);
            c
        }
    };

    Ok(GeneratedInstance {
        formula: Formula::new(p.num_vars, clauses).expect("variables in range"),
        generator: kind,
        params: StructuralParams::EquivalenceCore(p.clone()),
        knobs: Default::default(),
        seed,
        ground_truth: Truth::Sat,
        planted: Some(Planted::Model { assignment: values }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{check_witness, count_models};

    #[test]
    fn appendix_definitions() {
        let (p, q, r) = (Var(0), Var(1), Var(2));
        let mut clauses = definition(q, p, false).to_vec();
        clauses.extend(definition(r, p, true));
        assert_eq!(
            clauses,
            vec![
                Clause::new(q.negative(), p.negative()),
                Clause::new(p.positive(), q.positive()),
                Clause::new(r.negative(), p.positive()),
                Clause::new(p.negative(), r.positive()),
            ]
        );
        assert_eq!(count_models(&Formula::new(3, clauses).unwrap(), 20), Ok(2));
    }

    #[test]
    fn all_free_is_empty() {
        let inst =
            gen_equivalence_core(&EquivalenceCoreParams { num_vars: 4, free: 4, placement: Placement::Early }, 1)
                .unwrap();
        assert_eq!(inst.formula.num_clauses(), 0);
    }

    #[test]
    fn ten_three_has_eight_models() {
        for placement in [Placement::Early, Placement::Late, Placement::Shuffled] {
            let inst = gen_equivalence_core(&EquivalenceCoreParams { num_vars: 10, free: 3, placement }, 42).unwrap();
            assert_eq!(inst.formula.num_clauses(), 14);
            assert_eq!(count_models(&inst.formula, 20), Ok(8));
            let a = inst.planted.as_ref().unwrap().assignment().unwrap();
            assert!(check_witness(&inst.formula, a).unwrap().valid);
        }
    }

    #[test]
    fn errors() {
        let e = |n, f| {
            gen_equivalence_core(&EquivalenceCoreParams { num_vars: n, free: f, placement: Placement::Early }, 0)
        };
        assert!(e(3, 4).is_err());
        assert!(e(3, 0).is_err());
        assert!(e(0, 0).is_ok());
    }
}
