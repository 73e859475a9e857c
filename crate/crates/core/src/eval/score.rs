use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::{Decision, ParsedAnswer};
use crate::generators::{GeneratorKind, Truth};
use crate::logic::{check_witness, Assignment, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScoreError {
    #[error("answer assigns variable {var} but the instance has {num_vars}")]
    VariableMismatch { var: u32, num_vars: u32 },
    #[error("response for {response} scored against instance {instance}")]
    IdMismatch { instance: String, response: String },
}

/// Correctness flags for one parsed answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub decision_correct: bool,
    /// Defined only for SAT instances answered Yes.
    pub witness_valid: Option<bool>,
    pub predicted_sat_on_unsat: bool,
}

pub fn score(f: &Formula, truth: Truth, p: &ParsedAnswer) -> Result<Outcome, ScoreError> {
    if let Some(a) = &p.assignment {
        if let Some((&v, _)) = a.iter().find(|(v, _)| v.0 >= f.num_vars()) {
            return Err(ScoreError::VariableMismatch { var: v.0, num_vars: f.num_vars() });
        }
    }
    let decision_correct = matches!((truth, p.decision), (Truth::Sat, Decision::Yes) | (Truth::Unsat, Decision::No));
    let witness_valid = (truth == Truth::Sat && p.decision == Decision::Yes).then(|| {
        p.assignment
            .as_ref()
            .and_then(|a| Assignment::from_partial(a, f.num_vars(), &f.occurring_vars()).ok())
            .is_some_and(|a| check_witness(f, &a).is_ok_and(|r| r.valid))
    });
    Ok(Outcome {
        decision_correct,
        witness_valid,
        predicted_sat_on_unsat: truth == Truth::Unsat && p.decision == Decision::Yes,
    })
}

/// One scored response with the metadata needed for grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub model: String,
    pub instance_id: String,
    /// Position of the formula within its setting.
    pub formula_index: usize,
    pub verbalization: String,
    pub generator: GeneratorKind,
    pub setting: String,
    /// Swept knob, absent for grid settings.
    pub parameter: Option<String>,
    pub level: Option<f64>,
    pub target_clauses: usize,
    pub num_clauses: usize,
    pub ground_truth: Truth,
    pub decision: Decision,
    pub truncated: bool,
    pub decision_correct: bool,
    pub witness_valid: Option<bool>,
    pub predicted_sat_on_unsat: bool,
}

impl ScoreRecord {
    pub fn knob_levels(records: &[ScoreRecord]) -> BTreeMap<String, Vec<f64>> {
        let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for r in records {
            if let (Some(p), Some(l)) = (&r.parameter, r.level) {
                let levels = out.entry(p.clone()).or_default();
                if !levels.iter().any(|x| (x - l).abs() < 1e-12) {
                    levels.push(l);
                }
            }
        }
        for levels in out.values_mut() {
            levels.sort_by(f64::total_cmp);
        }
        out
    }
}
