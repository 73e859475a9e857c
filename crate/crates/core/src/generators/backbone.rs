use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    param_error, round_half_away, GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams, Truth,
};
use crate::logic::{Assignment, Clause, Formula, Var};
use crate::rng::rng_from_seed;

/// Polarity of the monotone remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Negative,
    /// Fair coin per instance.
    Random,
    Positive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackboneParams {
    /// Non-auxiliary variables; auxiliaries are appended after these.
    pub base_vars: u32,
    pub beta: f64,
    pub mono_density: f64,
    pub orientation: Orientation,
}

impl BackboneParams {
    pub fn backbone_size(&self) -> u32 {
        round_half_away(self.beta * f64::from(self.base_vars)) as u32
    }

    /// `round(density · |F|² / 2)`.
    pub fn mono_clauses(&self) -> usize {
        let free = f64::from(self.base_vars.saturating_sub(self.backbone_size()));
        round_half_away(self.mono_density * free * free / 2.0) as usize
    }

    pub fn num_clauses(&self) -> usize {
        2 * self.backbone_size() as usize + self.mono_clauses()
    }
}

pub fn gen_backbone(p: &BackboneParams, seed: u64) -> Result<GeneratedInstance, GenError> {
    let kind = GeneratorKind::Backbone;
    for (name, v) in [("beta", p.beta), ("mono_density", p.mono_density)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(param_error(kind, format!("{name} = {v} outside [0, 1]")));
        }
    }
    let b = p.backbone_size();
    if b > p.base_vars {
        return Err(param_error(kind, format!("backbone of {b} exceeds {} variables", p.base_vars)));
    }
    let free_count = p.base_vars - b;
    let mono = p.mono_clauses();
    if mono > 0 && free_count < 2 {
        return Err(param_error(
            kind,
            format!("{mono} monotone clauses need two distinct free variables, have {free_count}"),
        ));
    }

    let mut rng = rng_from_seed(seed);
    let order: Vec<Var> =
        index::sample(&mut rng, p.base_vars as usize, p.base_vars as usize).iter().map(|i| Var(i as u32)).collect();
    let mut backbone: Vec<(Var, bool)> = order[..b as usize].iter().map(|&v| (v, rng.random_bool(0.5))).collect();
    backbone.sort_by_key(|&(v, _)| v);
    let free = &order[b as usize..];
    let positive = match p.orientation {
        Orientation::Negative => false,
        Orientation::Positive => true,
        Orientation::Random => rng.random_bool(0.5),
    };

    let total_vars = p.base_vars + b;
    let mut clauses = Vec::with_capacity(2 * b as usize + mono);
    for (j, &(x, value)) in backbone.iter().enumerate() {
        let aux = Var(p.base_vars + j as u32);
        let pinned = if value { x.positive() } else { x.negative() };
        clauses.push(Clause::new(pinned, aux.positive()));
        clauses.push(Clause::new(pinned, aux.negative()));
    }
    for _ in 0..mono {
        let i = rng.random_range(0..free.len());
        let mut j = rng.random_range(0..free.len() - 1);
        if j >= i {
            j += 1;
        }
        let (y, z) = (free[i], free[j]);
        clauses.push(if positive {
            Clause::new(y.positive(), z.positive())
        } else {
            Clause::new(y.negative(), z.negative())
        });
    }

    let mut assignment = Assignment::all(total_vars, false);
    for &(x, value) in &backbone {
        assignment.set(x, value);
    }
    for &y in free {
        assignment.set(y, positive);
    }

    let mut resolved = p.clone();
    if resolved.orientation == Orientation::Random {
        resolved.orientation = if positive { Orientation::Positive } else { Orientation::Negative };
    }

    Ok(GeneratedInstance {
        formula: Formula::new(total_vars, clauses).expect("variables in range"),
        generator: kind,
        params: StructuralParams::Backbone(resolved),
        knobs: Default::default(),
        seed,
        ground_truth: Truth::Sat,
        planted: Some(Planted::Backbone { assignment, backbone }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{brute_force_models, check_witness};

    fn params(n: u32, beta: f64, d: f64, o: Orientation) -> BackboneParams {
        BackboneParams { base_vars: n, beta, mono_density: d, orientation: o }
    }

    #[test]
    fn clause_count_two_b_plus_mono() {
        assert!(gen_backbone(&params(8, 0.5, 1.25, Orientation::Negative), 0).is_err());
        // |B| = 4, |F| = 5, m = round(0.8 · 25 / 2) = 10
        let p = params(9, 4.0 / 9.0, 0.8, Orientation::Positive);
        assert_eq!(p.backbone_size(), 4);
        assert_eq!(p.mono_clauses(), 10);
        let inst = gen_backbone(&p, 3).unwrap();
        assert_eq!(inst.formula.num_clauses(), 18);
        assert_eq!(inst.formula.num_vars(), 13);
    }

    #[test]
    fn pure_monotone_when_beta_zero() {
        let inst = gen_backbone(&params(6, 0.0, 0.5, Orientation::Positive), 2).unwrap();
        assert!(inst.formula.clauses().iter().all(|c| c.first.is_positive() && c.second.is_positive()));
        let a = inst.planted.unwrap().assignment().unwrap().clone();
        assert!(a.values().iter().all(|&v| v));
    }

    #[test]
    fn every_model_agrees_with_backbone() {
        let p = params(8, 3.0 / 8.0, 0.6, Orientation::Negative);
        assert_eq!(p.backbone_size(), 3);
        for seed in 0..5 {
            let inst = gen_backbone(&p, seed).unwrap();
            let Some(Planted::Backbone { assignment, backbone }) = &inst.planted else {
                panic!("backbone planted");
            };
            assert!(check_witness(&inst.formula, assignment).unwrap().valid);
            let models = brute_force_models(&inst.formula, 20).unwrap();
            assert!(!models.is_empty());
            for m in &models {
                for &(x, v) in backbone {
                    assert_eq!(m.get(x), v);
                }
            }
        }
    }

    #[test]
    fn random_orientation_is_resolved() {
        let inst = gen_backbone(&params(6, 0.5, 1.0, Orientation::Random), 8).unwrap();
        let StructuralParams::Backbone(p) = &inst.params else { unreachable!() };
        assert_ne!(p.orientation, Orientation::Random);
    }

    #[test]
    fn too_few_free_variables() {
        assert!(gen_backbone(&params(3, 2.0 / 3.0, 1.0, Orientation::Negative), 0).is_err());
    }
}
