mod common;

use proptest::prelude::*;
use sat2probe::logic::{check_witness, count_models, decide, SatResult};
use sat2probe::perturb::{
    add_fillers, duplicate, rename_variables, shuffle_clauses, DuplicateOptions, Layout, Perturbation,
};

fn sorted_clauses(f: &sat2probe::Formula) -> Vec<[i64; 2]> {
    let mut c = f.to_signed_pairs();
    c.sort();
    c
}

fn layout() -> impl Strategy<Value = Layout> {
    prop_oneof![Just(Layout::Grouped), Just(Layout::Interleaved)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shuffle_permutes_clauses(f in common::formula(10, 30), seed in any::<u64>()) {
        let g = shuffle_clauses(&f, seed);
        prop_assert_eq!(sorted_clauses(&g), sorted_clauses(&f));
        prop_assert_eq!(count_models(&g, 16).unwrap(), count_models(&f, 16).unwrap());
        prop_assert_eq!(shuffle_clauses(&f, seed), g);
    }

    #[test]
    fn rename_preserves_count(f in common::formula(10, 30), seed in any::<u64>()) {
        let (g, r) = rename_variables(&f, seed);
        prop_assert_eq!(g.num_vars(), f.num_vars());
        prop_assert_eq!(count_models(&g, 16).unwrap(), count_models(&f, 16).unwrap());
        let mapped: Vec<_> = f.clauses().iter().map(|c| r.apply_clause(c)).collect();
        prop_assert_eq!(g.clauses(), mapped.as_slice());
    }

    #[test]
    fn fillers_keep_status_and_witness(f in common::formula(10, 20), r in 0usize..12, seed in any::<u64>()) {
        let out = add_fillers(&f, r, seed);
        prop_assert_eq!(out.formula.num_clauses(), f.num_clauses() + r);
        prop_assert_eq!(&out.formula.clauses()[..f.num_clauses()], f.clauses());
        match decide(&f) {
            SatResult::Sat(a) => {
                let w = out.extend_witness(&a);
                prop_assert!(check_witness(&out.formula, &w).unwrap().valid);
            }
            SatResult::Unsat(_) => prop_assert!(!decide(&out.formula).is_sat()),
        }
    }

    #[test]
    fn duplicate_squares_count(f in common::formula(7, 14), layout in layout(), shuffle in any::<bool>(), seed in any::<u64>()) {
        let opts = DuplicateOptions { copies: 2, layout, per_copy_shuffle: shuffle, trigger: None };
        let d = duplicate(&f, &opts, seed);
        prop_assert_eq!(d.formula.num_vars(), 2 * f.num_vars());
        prop_assert_eq!(d.formula.num_clauses(), 2 * f.num_clauses());
        let m = count_models(&f, 16).unwrap();
        prop_assert_eq!(count_models(&d.formula, 16).unwrap(), m * m);
    }

    #[test]
    fn triple_copies_keep_status(f in common::formula(10, 25), layout in layout(), seed in any::<u64>()) {
        let d = duplicate(&f, &DuplicateOptions::new(3, layout), seed);
        prop_assert_eq!(decide(&d.formula).is_sat(), decide(&f).is_sat());
        if let SatResult::Sat(a) = decide(&f) {
            prop_assert!(check_witness(&d.formula, &d.extend_witness(&a)).unwrap().valid);
        }
    }

    #[test]
    fn transported_witnesses_stay_valid(f in common::formula(10, 25), seed in any::<u64>()) {
        let SatResult::Sat(a) = decide(&f) else { return Ok(()) };
        for p in [
            Perturbation::Shuffle,
            Perturbation::Rename,
            Perturbation::AddFillers { count: 5 },
            Perturbation::Duplicate(DuplicateOptions::new(2, Layout::Interleaved)),
        ] {
            let (g, w) = p.apply(&f, Some(&a), seed);
            prop_assert!(check_witness(&g, &w.unwrap()).unwrap().valid, "{:?}", p);
        }
    }
}
