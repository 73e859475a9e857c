//! Formula-first averaging: each formula's verbalizations are averaged
//! before averaging across formulas.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::score::ScoreRecord;
use crate::generators::{GeneratorKind, Truth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupField {
    Model,
    Generator,
    Clauses,
    /// Swept knob and its level.
    Level,
    Verbalization,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
struct GroupKey {
    model: Option<String>,
    generator: Option<GeneratorKind>,
    clauses: Option<usize>,
    parameter: Option<String>,
    level_bits: Option<u64>,
    verbalization: Option<String>,
}

fn key_of(r: &ScoreRecord, fields: &[GroupField]) -> GroupKey {
    let mut k = GroupKey::default();
    for f in fields {
        match f {
            GroupField::Model => k.model = Some(r.model.clone()),
            GroupField::Generator => k.generator = Some(r.generator),
            GroupField::Clauses => k.clauses = Some(r.target_clauses),
            GroupField::Level => {
                k.parameter = r.parameter.clone();
                k.level_bits = r.level.map(f64::to_bits);
            }
            GroupField::Verbalization => k.verbalization = Some(r.verbalization.clone()),
        }
    }
    k
}

/// Percentages in `[0, 100]`; a metric with no eligible formula is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub model: Option<String>,
    pub generator: Option<GeneratorKind>,
    pub target_clauses: Option<usize>,
    pub parameter: Option<String>,
    pub level: Option<f64>,
    pub verbalization: Option<String>,
    pub n_formulas: usize,
    pub n_responses: usize,
    pub sat_accuracy: Option<f64>,
    /// Over all SAT responses; a No answer counts as an invalid witness.
    pub witness_validity: Option<f64>,
    /// Over SAT responses answered Yes only.
    pub witness_validity_yes: Option<f64>,
    /// Share of UNSAT responses answered Yes.
    pub sat_bias: Option<f64>,
    pub truncation_rate: Option<f64>,
}

/// Mean over formulas of the per-formula mean of `metric`; records where
/// `metric` is `None` are not counted.
pub fn formula_mean<F>(records: &[&ScoreRecord], metric: F) -> Option<f64>
where
    F: Fn(&ScoreRecord) -> Option<bool>,
{
    let mut per_formula: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in records {
        if let Some(hit) = metric(r) {
            let e = per_formula.entry(r.instance_id.as_str()).or_default();
            e.0 += usize::from(hit);
            e.1 += 1;
        }
    }
    if per_formula.is_empty() {
        return None;
    }
    let sum: f64 = per_formula.values().map(|&(h, n)| h as f64 / n as f64).sum();
    Some(100.0 * sum / per_formula.len() as f64)
}

/// Per-formula scores of `metric` (fractions in `[0, 1]`), keyed by instance id.
pub fn per_formula_scores<F>(records: &[&ScoreRecord], metric: F) -> BTreeMap<String, f64>
where
    F: Fn(&ScoreRecord) -> Option<bool>,
{
    let mut acc: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in records {
        if let Some(hit) = metric(r) {
            let e = acc.entry(r.instance_id.clone()).or_default();
            e.0 += usize::from(hit);
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (h, n))| (k, h as f64 / n as f64)).collect()
}

pub fn sat_metric(r: &ScoreRecord) -> Option<bool> {
    Some(r.decision_correct)
}

pub fn witness_metric(r: &ScoreRecord) -> Option<bool> {
    (r.ground_truth == Truth::Sat).then(|| r.witness_valid.unwrap_or(false))
}

pub fn witness_yes_metric(r: &ScoreRecord) -> Option<bool> {
    r.witness_valid
}

pub fn bias_metric(r: &ScoreRecord) -> Option<bool> {
    (r.ground_truth == Truth::Unsat).then_some(r.predicted_sat_on_unsat)
}

pub fn metrics_for(records: &[&ScoreRecord]) -> AggregateMetrics {
    let mut formulas: Vec<&str> = records.iter().map(|r| r.instance_id.as_str()).collect();
    formulas.sort_unstable();
    formulas.dedup();
    AggregateMetrics {
        model: None,
        generator: None,
        target_clauses: None,
        parameter: None,
        level: None,
        verbalization: None,
        n_formulas: formulas.len(),
        n_responses: records.len(),
        sat_accuracy: formula_mean(records, sat_metric),
        witness_validity: formula_mean(records, witness_metric),
        witness_validity_yes: formula_mean(records, witness_yes_metric),
        sat_bias: formula_mean(records, bias_metric),
        truncation_rate: formula_mean(records, |r| Some(r.truncated)),
    }
}

/// One row per distinct combination of `fields`, in key order.
pub fn aggregate(records: &[ScoreRecord], fields: &[GroupField]) -> Vec<AggregateMetrics> {
    let mut groups: BTreeMap<GroupKey, Vec<&ScoreRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(key_of(r, fields)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(key, rs)| {
            let mut m = metrics_for(&rs);
            m.model = key.model;
            m.generator = key.generator;
            m.target_clauses = key.clauses;
            m.parameter = key.parameter;
            m.level = key.level_bits.map(f64::from_bits);
            m.verbalization = key.verbalization;
            m
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::eval::parse::Decision;

    pub(crate) fn record(formula: usize, truth: Truth, correct: bool, witness: Option<bool>) -> ScoreRecord {
        let yes = match truth {
            Truth::Sat => correct,
            Truth::Unsat => !correct,
        };
        ScoreRecord {
            model: "m".into(),
            instance_id: format!("f{formula}"),
            formula_index: formula,
            verbalization: "logic".into(),
            generator: GeneratorKind::EquivalenceCore,
            setting: "s".into(),
            parameter: None,
            level: None,
            target_clauses: 20,
            num_clauses: 20,
            ground_truth: truth,
            decision: if yes { Decision::Yes } else { Decision::No },
            truncated: false,
            decision_correct: correct,
            witness_valid: if truth == Truth::Sat && yes { witness } else { None },
            predicted_sat_on_unsat: truth == Truth::Unsat && yes,
        }
    }

    #[test]
    fn formula_first_average() {
        let mut rs = Vec::new();
        for f in 0..10 {
            for v in 0..6 {
                rs.push(record(f, Truth::Sat, f != 0 || v < 3, Some(true)));
            }
        }
        let m = &aggregate(&rs, &[GroupField::Model])[0];
        assert!((m.sat_accuracy.unwrap() - 95.0).abs() < 1e-12);
        assert_eq!(m.n_formulas, 10);
        assert_eq!(m.sat_bias, None);
    }

    #[test]
    fn order_of_averaging_matters() {
        // 1 record from f0 (wrong), 3 from f1 (right): pooled 75%, formula-first 50%
        let mut rs = vec![record(0, Truth::Sat, false, None)];
        rs.extend((0..3).map(|_| record(1, Truth::Sat, true, Some(true))));
        let m = metrics_for(&rs.iter().collect::<Vec<_>>());
        assert_eq!(m.sat_accuracy, Some(50.0));
        assert_eq!(m.witness_validity, Some(50.0));
        assert_eq!(m.witness_validity_yes, Some(100.0));
    }

    #[test]
    fn groups_and_empty_cells() {
        let mut rs: Vec<ScoreRecord> = (0..4).map(|f| record(f, Truth::Unsat, f % 2 == 0, None)).collect();
        rs[3].generator = GeneratorKind::ImplicationCycle;
        let out = aggregate(&rs, &[GroupField::Generator]);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].generator, Some(GeneratorKind::ImplicationCycle));
        assert_eq!(out[0].sat_bias, Some(100.0));
        assert_eq!(out[1].sat_accuracy.map(f64::round), Some(67.0));
        assert_eq!(out[1].witness_validity, None);
        assert!(aggregate(&[], &[GroupField::Model]).is_empty());
    }
}
