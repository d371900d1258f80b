mod common;

use common::{member_oracle, params};
use hdtk::automaton::{random_automaton, random_hd_automaton, validate_and_complete, CompletionMode, RandomParams};
use hdtk::hd::{inclusion_hd, inclusion_oracle_det};
use hdtk::lasso::lasso_member;
use hdtk::{Error, LassoWord};
use proptest::prelude::*;

#[test]
fn inclusion_needs_matching_alphabets() {
    let a = common::fixture("fixA.tpa");
    let b = common::fixture("figB.tpa");
    assert!(matches!(inclusion_hd(&a, &b, true), Err(Error::Alphabet(_))));
}

#[test]
fn non_hd_target_is_a_precondition_failure() {
    let a = common::fixture("fixA.tpa");
    assert!(matches!(inclusion_hd(&a, &a, false), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inclusion_agrees_with_lassos(s1 in any::<u64>(), s2 in any::<u64>(), n in 2..5usize, hi in 1..4u32) {
        let a = validate_and_complete(&random_automaton(s1, &params(n, 2, 0, hi)).unwrap(), CompletionMode::AddRejectingSink).unwrap();
        let d = random_automaton(s2, &RandomParams { determinism_bias: 1.0, ..params(n, 2, 0, hi) }).unwrap();
        let exact = inclusion_oracle_det(&a, &d).unwrap();
        match &exact.counterexample {
            Some(w) => {
                prop_assert!(!exact.included);
                prop_assert!(member_oracle(&a, w) && !member_oracle(&d, w));
            }
            None => {
                prop_assert!(exact.included);
                for w in LassoWord::enumerate(2, 3, 3) {
                    prop_assert!(!member_oracle(&a, &w) || member_oracle(&d, &w));
                }
            }
        }
        prop_assert_eq!(inclusion_hd(&a, &d, true).unwrap().included, exact.included);
    }

    #[test]
    fn hd_automata_include_their_seed(seed in any::<u64>(), n in 3..7usize) {
        let (a, d) = random_hd_automaton(seed, &params(n, 2, 0, 2)).unwrap();
        prop_assert!(inclusion_oracle_det(&a, &d).unwrap().included);
        prop_assert!(inclusion_hd(&d, &a, false).unwrap().included);
        prop_assert!(inclusion_hd(&a, &a, true).unwrap().included);
    }

    #[test]
    fn lasso_text_round_trip(u in prop::collection::vec(0..3usize, 0..4), v in prop::collection::vec(0..3usize, 1..4)) {
        let alphabet: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let w = LassoWord::new(u, v).unwrap();
        let text = w.display(&alphabet).to_string();
        prop_assert_eq!(LassoWord::parse(&text, &alphabet).unwrap(), w.clone());
        let a = common::fixture("figB.tpa");
        prop_assert_eq!(lasso_member(&a, &w).unwrap(), member_oracle(&a, &w));
    }
}
