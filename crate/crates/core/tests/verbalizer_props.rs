mod common;

use proptest::prelude::*;
use sat2probe::eval::{parse_decision, parse_response, Decision, ModelResponse};
use sat2probe::logic::{decide, SatResult};
use sat2probe::verbalize::llm::{fallback_sentence, verbalize_story};
use sat2probe::verbalize::mock::StoryWriter;
use sat2probe::verbalize::{parse_body, verbalize, ClueStatus, Scheme, StoryOptions, Theme};

fn scheme() -> impl Strategy<Value = Scheme> {
    prop::sample::select(Scheme::ALL.to_vec())
}

fn theme() -> impl Strategy<Value = Theme> {
    prop::sample::select(Theme::ALL.to_vec())
}

fn nonempty(f: &sat2probe::Formula) -> bool {
    f.num_clauses() > 0
}

fn no_tautologies(f: &sat2probe::Formula) -> bool {
    f.clauses().iter().all(|c| c.first != !c.second)
}

fn oracle_text(v: &sat2probe::verbalize::Verbalization, f: &sat2probe::Formula) -> String {
    match decide(f) {
        SatResult::Sat(a) => {
            let pairs: Vec<String> = f
                .occurring_vars()
                .into_iter()
                .map(|x| {
                    let (t, fl) = v.labels.for_var(x);
                    format!("\"{}\": \"{}\"", v.entities.name(x), if a.get(x) { t } else { fl })
                })
                .collect();
            format!("Reasoning...\n```json\n{{{}}}\n```\nThe answer is: Yes", pairs.join(", "))
        }
        SatResult::Unsat(_) => "No assignment works.\nThe answer is: No".into(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn templates_parse_back(f in common::formula(40, 40), s in scheme()) {
        let v = verbalize(&f, s);
        prop_assert_eq!(parse_body(&v.body, s, &v.entities).unwrap(), f.clauses().to_vec());
        prop_assert!(v.prompt.starts_with(&v.body));
    }

    #[test]
    fn template_answers_decode(f in common::formula(12, 20).prop_filter("clauses", nonempty), s in scheme()) {
        let v = verbalize(&f, s);
        let resp = ModelResponse {
            instance_id: "x".into(),
            verbalization_id: v.id.clone(),
            model: "m".into(),
            text: oracle_text(&v, &f),
            truncated: false,
            latency_ms: None,
            error: None,
        };
        let parsed = parse_response(&resp, &v);
        match decide(&f) {
            SatResult::Sat(a) => {
                prop_assert_eq!(parsed.decision, Decision::Yes);
                let got = parsed.assignment.unwrap();
                prop_assert!(f.occurring_vars().iter().all(|&x| got[&x] == a.get(x)));
            }
            SatResult::Unsat(_) => prop_assert_eq!(parsed.decision, Decision::No),
        }
    }

    #[test]
    fn faithful_stories_never_fall_back(f in common::formula(10, 12).prop_filter("tautology", no_tautologies), t in theme(), seed in any::<u64>()) {
        let v = verbalize_story(&f, t, &StoryWriter::new(), seed, &StoryOptions::default()).unwrap();
        prop_assert_eq!(v.clues.len(), f.num_clauses());
        prop_assert!(v.clues.iter().all(|c| c.status == ClueStatus::FirstPass));
        prop_assert!(v.prompt.contains("The answer is: Yes"));
        let resp = ModelResponse {
            instance_id: "x".into(),
            verbalization_id: v.id.clone(),
            model: "m".into(),
            text: oracle_text(&v, &f),
            truncated: false,
            latency_ms: None,
            error: None,
        };
        prop_assert_eq!(parse_response(&resp, &v).decision == Decision::Yes, decide(&f).is_sat());
    }

    #[test]
    fn stubborn_clue_falls_back(f in common::formula(8, 6).prop_filter("clauses", |f| nonempty(f) && no_tautologies(f)), t in theme()) {
        let j = f.num_clauses();
        let writer = StoryWriter::new().failing_clue(j, 3);
        let v = verbalize_story(&f, t, &writer, 0, &StoryOptions::default()).unwrap();
        let last = v.clues.last().unwrap();
        prop_assert_eq!(&last.status, &ClueStatus::Fallback);
        prop_assert_eq!(&last.paragraph, &fallback_sentence(t, &f.clauses()[j - 1]));
        prop_assert!(v.clues[..j - 1].iter().all(|c| c.status == ClueStatus::FirstPass));
    }

    #[test]
    fn tautologies_fall_back(v in 0u32..4, t in theme()) {
        use sat2probe::{Clause, Formula, Var};
        let f = Formula::new(4, vec![Clause::new(Var(v).positive(), Var(v).negative())]).unwrap();
        let story = verbalize_story(&f, t, &StoryWriter::new(), 1, &StoryOptions::default()).unwrap();
        prop_assert_eq!(&story.clues[0].status, &ClueStatus::Fallback);
    }

    #[test]
    fn decision_is_last_marker(a in any::<bool>(), b in any::<bool>(), noise in "[a-z .]{0,40}") {
        let word = |x: bool| if x { "Yes" } else { "No" };
        let text = format!("The answer is: {}\n{noise}\nThe answer is: {}", word(a), word(b));
        prop_assert_eq!(parse_decision(&text), if b { Decision::Yes } else { Decision::No });
    }
}
