use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{param_error, GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams, Truth};
use crate::logic::{Assignment, Clause, Formula, Var};
use crate::rng::{rng_from_seed, InstanceRng};

/// Positive-monotone part over `P`, negative-monotone part over `N`, and one
/// bridge clause `(¬p* ∨ q*)` inserted at a chosen position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoBridgeParams {
    pub pos_clauses: u32,
    pub neg_clauses: u32,
    pub pos_vars: u32,
    pub neg_vars: u32,
    /// 1-based index of the bridge in the final list, in `1..=pos+neg+1`.
    pub bridge_pos: u32,
}

impl MonoBridgeParams {
    pub fn num_clauses(&self) -> usize {
        (self.pos_clauses + self.neg_clauses + 1) as usize
    }
}

const DUPLICATE_RETRIES: usize = 10;

fn sample_pair(rng: &mut InstanceRng, pool: &[Var]) -> (Var, Var) {
    if pool.len() < 2 {
        return (pool[0], pool[0]);
    }
    let i = rng.random_range(0..pool.len());
    let mut j = rng.random_range(0..pool.len() - 1);
    if j >= i {
        j += 1;
    }
    (pool[i], pool[j])
}

/// `count` monotone clauses over `pool`; repeats are resampled a bounded
/// number of times and kept if they persist.
fn monotone_part(rng: &mut InstanceRng, pool: &[Var], count: u32, positive: bool) -> Vec<Clause> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut pair = sample_pair(rng, pool);
        for _ in 0..DUPLICATE_RETRIES {
            let key = (pair.0.min(pair.1), pair.0.max(pair.1));
            if !seen.contains(&key) {
                break;
            }
            pair = sample_pair(rng, pool);
        }
        seen.insert((pair.0.min(pair.1), pair.0.max(pair.1)));
        let (a, b) = pair;
        out.push(if positive {
            Clause::new(a.positive(), b.positive())
        } else {
            Clause::new(a.negative(), b.negative())
        });
    }
    out
}

pub fn gen_mono_bridge(p: &MonoBridgeParams, seed: u64) -> Result<GeneratedInstance, GenError> {
    let kind = GeneratorKind::MonoBridge;
    if p.pos_vars < 1 || p.neg_vars < 1 {
        return Err(param_error(kind, "both polarity regions need at least one variable"));
    }
    if p.neg_clauses > 0 && p.neg_vars < 2 {
        // (¬q ∨ ¬q) would forbid the bridge endpoint
        return Err(param_error(kind, "negative clauses need at least two negative variables"));
    }
    let total = p.num_clauses() as u32;
    if !(1..=total).contains(&p.bridge_pos) {
        return Err(param_error(kind, format!("bridge position {} outside 1..={total}", p.bridge_pos)));
    }

    let mut rng = rng_from_seed(seed);
    let num_vars = p.pos_vars + p.neg_vars;
    let order: Vec<Var> =
        index::sample(&mut rng, num_vars as usize, num_vars as usize).iter().map(|i| Var(i as u32)).collect();
    let (pos, neg) = order.split_at(p.pos_vars as usize);
    let mut clauses = monotone_part(&mut rng, pos, p.pos_clauses, true);
    clauses.extend(monotone_part(&mut rng, neg, p.neg_clauses, false));
    let p_star = pos[rng.random_range(0..pos.len())];
    let q_star = neg[rng.random_range(0..neg.len())];
    clauses.insert(p.bridge_pos as usize - 1, Clause::new(p_star.negative(), q_star.positive()));

    let mut assignment = Assignment::all(num_vars, false);
    for &v in pos {
        assignment.set(v, true);
    }
    assignment.set(q_star, true);

    Ok(GeneratedInstance {
        formula: Formula::new(num_vars, clauses).expect("variables in range"),
        generator: kind,
        params: StructuralParams::MonoBridge(p.clone()),
        knobs: Default::default(),
        seed,
        ground_truth: Truth::Sat,
        planted: Some(Planted::Model { assignment }),
    })
}
