use sat2probe::eval::{aggregate, GroupField};
use sat2probe::generators::GeneratorKind;
use sat2probe::harness::{
    evaluate, generate_dataset, main_table, score_responses, significance, MockModel, MockPolicy, RunConfig,
};
use sat2probe::par::Execution;

fn config() -> RunConfig {
    let mut c = RunConfig { master_seed: 99, formulas_per_setting: 2, ..RunConfig::default() };
    for g in &mut c.grid {
        g.targets.truncate(2);
    }
    for s in &mut c.sweeps {
        s.targets = vec![20];
    }
    c
}

#[test]
fn oracle_and_always_yes_calibrate() {
    let (records, skipped) = generate_dataset(&config(), Execution::Parallel);
    assert!(skipped.is_empty());
    let mut responses = evaluate(&records, &MockModel::new(MockPolicy::Oracle), 4);
    responses.extend(evaluate(&records, &MockModel::new(MockPolicy::AlwaysYes), 4));
    let (scores, mismatches) = score_responses(&records, &responses);
    assert!(mismatches.is_empty());
    let metrics = aggregate(&scores, &[GroupField::Model, GroupField::Generator]);
    for m in &metrics {
        let model = m.model.as_deref().unwrap();
        let ic = m.generator == Some(GeneratorKind::ImplicationCycle);
        match (model, ic) {
            ("mock-oracle", false) => {
                assert_eq!(m.sat_accuracy, Some(100.0));
                assert_eq!(m.witness_validity, Some(100.0));
            }
            ("mock-oracle", true) => assert_eq!(m.sat_bias, Some(0.0)),
            ("mock-always_yes", true) => {
                assert_eq!(m.sat_accuracy, Some(0.0));
                assert_eq!(m.sat_bias, Some(100.0));
                assert_eq!(m.witness_validity, None);
            }
            ("mock-always_yes", false) => assert_eq!(m.sat_accuracy, Some(100.0)),
            _ => unreachable!(),
        }
    }

    let table = main_table(&scores);
    assert_eq!(table.len(), 1 + 4 * 2);
    assert_eq!(table[0].len(), 2 + 2 * 2);

    let tests = significance(&scores, None);
    let swept: std::collections::BTreeSet<(GeneratorKind, String)> =
        scores.iter().filter_map(|s| s.parameter.clone().map(|p| (s.generator, p))).collect();
    for (g, p) in &swept {
        assert!(tests.iter().any(|t| t.generator == *g && &t.parameter == p), "{g:?} {p}");
    }
}

#[test]
fn mock_runs_are_deterministic() {
    let (records, _) = generate_dataset(&config(), Execution::Sequential);
    let coin = MockModel::new(MockPolicy::Coin { p: 0.5 });
    let a = evaluate(&records, &coin, 8);
    let b = evaluate(&records, &coin, 1);
    assert_eq!(a, b);
}
