use std::collections::HashMap;
use std::time::Instant;

use super::dataset::DatasetRecord;
use super::models::Responder;
use crate::eval::{parse_response, score, ModelResponse, ScoreRecord};
use crate::par::{self, Execution};
use crate::rng::child_seed;

/// FNV-1a, stable across platforms and releases.
fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Per-request seed from the instance seed, the model and the verbalization.
pub fn request_seed(record: &DatasetRecord, model: &str, verbalization: usize) -> u64 {
    child_seed(record.seed ^ stable_hash(model), verbalization as u64)
}

/// Answers every prompt of every record with at most `parallelism` requests
/// in flight. Failed requests become records with `error` set.
pub fn evaluate(records: &[DatasetRecord], responder: &dyn Responder, parallelism: usize) -> Vec<ModelResponse> {
    let jobs: Vec<(usize, usize)> =
        records.iter().enumerate().flat_map(|(i, r)| (0..r.verbalizations.len()).map(move |j| (i, j))).collect();
    let model = responder.name().to_string();
    par::with_thread_limit(parallelism, || {
        par::map(Execution::Parallel, &jobs, |&(i, j)| {
            let record = &records[i];
            let v = &record.verbalizations[j];
            let started = Instant::now();
            let reply = responder.respond(record, v, request_seed(record, &model, j));
            let latency_ms = responder.timed().then(|| started.elapsed().as_millis() as u64);
            let (text, truncated, error) = match reply {
                Ok(r) => (r.text, r.truncated, None),
                Err(e) => {
                    log::warn!("{} / {}: {e}", record.id, v.id);
                    (String::new(), false, Some(e.to_string()))
                }
            };
            ModelResponse {
                instance_id: record.id.clone(),
                verbalization_id: v.id.clone(),
                model: model.clone(),
                text,
                truncated,
                latency_ms,
                error,
            }
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub instance_id: String,
    pub verbalization_id: String,
    pub reason: String,
}

/// Joins responses to their records and scores them. Responses that do not
/// match any record are returned separately.
pub fn score_responses(records: &[DatasetRecord], responses: &[ModelResponse]) -> (Vec<ScoreRecord>, Vec<Mismatch>) {
    let by_id: HashMap<&str, &DatasetRecord> = records.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut scores = Vec::with_capacity(responses.len());
    let mut mismatches = Vec::new();
    for resp in responses {
        let mismatch = |reason: String| Mismatch {
            instance_id: resp.instance_id.clone(),
            verbalization_id: resp.verbalization_id.clone(),
            reason,
        };
        let Some(record) = by_id.get(resp.instance_id.as_str()) else {
            mismatches.push(mismatch("no such instance in the dataset".into()));
            continue;
        };
        let Some(v) = record.verbalization(&resp.verbalization_id) else {
            mismatches.push(mismatch("no such verbalization for this instance".into()));
            continue;
        };
        let f = match record.formula() {
            Ok(f) => f,
            Err(e) => {
                mismatches.push(mismatch(e.to_string()));
                continue;
            }
        };
        let parsed = parse_response(resp, v);
        let outcome = match score(&f, record.ground_truth, &parsed) {
            Ok(o) => o,
            Err(e) => {
                mismatches.push(mismatch(e.to_string()));
                continue;
            }
        };
        scores.push(ScoreRecord {
            model: resp.model.clone(),
            instance_id: record.id.clone(),
            formula_index: record.formula_index,
            verbalization: v.id.clone(),
            generator: record.generator,
            setting: record.setting.clone(),
            parameter: record.parameter.clone(),
            level: record.level,
            target_clauses: record.target_clauses,
            num_clauses: record.clauses.len(),
            ground_truth: record.ground_truth,
            decision: parsed.decision,
            truncated: resp.truncated,
            decision_correct: outcome.decision_correct,
            witness_valid: outcome.witness_valid,
            predicted_sat_on_unsat: outcome.predicted_sat_on_unsat,
        });
    }
    (scores, mismatches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorKind;
    use crate::harness::{generate_dataset, GridSpec, MockModel, MockPolicy, RunConfig};
    use crate::verbalize::{ChatError, ChatReply, Verbalization};
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::time::Duration;

    fn dataset() -> Vec<DatasetRecord> {
        let mut c = RunConfig { formulas_per_setting: 3, ..RunConfig::default() };
        c.grid = vec![
            GridSpec {
                generator: GeneratorKind::ImplicationCycle,
                targets: vec![5, 10],
                knobs: Default::default(),
                base: None,
                copies: 2,
                layout: Default::default(),
            },
            GridSpec {
                generator: GeneratorKind::MonoBridge,
                targets: vec![10],
                knobs: Default::default(),
                base: None,
                copies: 2,
                layout: Default::default(),
            },
        ];
        c.sweeps.clear();
        generate_dataset(&c, Execution::Sequential).0
    }

    #[test]
    fn oracle_scores_perfectly() {
        let records = dataset();
        let responses = evaluate(&records, &MockModel::new(MockPolicy::Oracle), 4);
        assert_eq!(responses.len(), records.len() * 6);
        assert!(responses.iter().all(|r| r.latency_ms.is_none() && r.error.is_none()));
        let (scores, mismatches) = score_responses(&records, &responses);
        assert!(mismatches.is_empty());
        assert!(scores.iter().all(|s| s.decision_correct));
        assert!(scores.iter().filter(|s| s.ground_truth.is_sat()).all(|s| s.witness_valid == Some(true)));
    }

    #[test]
    fn always_yes_fails_unsat_and_witnesses() {
        let records = dataset();
        let responses = evaluate(&records, &MockModel::new(MockPolicy::AlwaysYes), 2);
        let (scores, _) = score_responses(&records, &responses);
        for s in &scores {
            assert_eq!(s.decision_correct, s.ground_truth.is_sat());
            assert_eq!(s.predicted_sat_on_unsat, !s.ground_truth.is_sat());
        }
    }

    #[test]
    fn budget_truncates() {
        let records = dataset();
        let model = MockModel::new(MockPolicy::Oracle).with_padding(50).with_budget(Some(10));
        let responses = evaluate(&records, &model, 2);
        assert!(responses.iter().all(|r| r.truncated));
        let (scores, _) = score_responses(&records, &responses);
        assert!(scores.iter().all(|s| !s.decision_correct && s.truncated));
    }

    struct Counting {
        now: AtomicUsize,
        peak: AtomicUsize,
    }

    impl Responder for Counting {
        fn name(&self) -> &str {
            "counting"
        }

        fn respond(&self, _: &DatasetRecord, _: &Verbalization, _: u64) -> Result<ChatReply, ChatError> {
            let n = self.now.fetch_add(1, Ordering::SeqCst) + 1;
            self.peak.fetch_max(n, Ordering::SeqCst);
            std::thread::sleep(Duration::from_millis(2));
            self.now.fetch_sub(1, Ordering::SeqCst);
            Err(ChatError::Transport("offline".into()))
        }
    }

    #[test]
    fn parallelism_is_capped_and_errors_recorded() {
        let records = dataset();
        let c = Counting { now: AtomicUsize::new(0), peak: AtomicUsize::new(0) };
        let responses = evaluate(&records, &c, 3);
        assert!(c.peak.load(Ordering::SeqCst) <= 3);
        assert!(responses.iter().all(|r| r.error.is_some() && r.latency_ms.is_some()));
        let (scores, _) = score_responses(&records, &responses);
        assert!(scores.iter().all(|s| s.decision == crate::eval::Decision::Unparsable));
    }

    #[test]
    fn unknown_responses_are_reported() {
        let records = dataset();
        let mut responses = evaluate(&records[..1], &MockModel::new(MockPolicy::AlwaysNo), 1);
        responses[0].instance_id = "nope".into();
        responses[1].verbalization_id = "nope".into();
        let (scores, mismatches) = score_responses(&records, &responses);
        assert_eq!(mismatches.len(), 2);
        assert_eq!(scores.len(), responses.len() - 2);
    }

    #[test]
    fn request_seeds_differ_by_model_and_slot() {
        let records = dataset();
        let r = &records[0];
        assert_ne!(request_seed(r, "a", 0), request_seed(r, "b", 0));
        assert_ne!(request_seed(r, "a", 0), request_seed(r, "a", 1));
        assert_eq!(request_seed(r, "a", 2), request_seed(r, "a", 2));
    }
}
